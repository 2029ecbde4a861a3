"""Compiled sampling kernels: a bit-identical mirror of symest._kernels_py.

Both backends draw from the same Philox stream in the same order and use
the same IEEE-754 double operations (the build disables FP contraction),
so their outputs match the pure-Python reference exactly.  Keep the two
files in lockstep when changing either.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport exp, log, sqrt
from numpy.random cimport bitgen_t
from scipy.special.cython_special cimport ndtr, ndtri

import numpy as np

from .errors import DegenerateConditionalError, TailMassError

BACKEND_NAME = "compiled"

cdef double TAIL_Z = 8.0
cdef double MAX_TAIL_Z = 40.0
cdef int MAX_POSITION_TRIES = 100

cdef const char *CAPSULE_NAME = "BitGenerator"


cdef bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("gen must be a numpy Generator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


cdef inline double _next(bitgen_t *rng) noexcept nogil:
    return rng.next_double(rng.state)


cdef inline double _next_nonzero(bitgen_t *rng) noexcept nogil:
    cdef double q = rng.next_double(rng.state)
    while q == 0.0:
        q = rng.next_double(rng.state)
    return q


cdef double _site_update(bitgen_t *rng, double ycur, double theta, double lam,
                         double lo, double hi,
                         double gprev, bint has_prev,
                         double ynext, bint has_next) noexcept nogil:
    cdef double wlo = lo
    cdef double whi = hi
    cdef double d1, u1, su1, a, b, width
    cdef double gcur, d2, u2, su2, s, r, sr, ss
    cdef double p1lo, p1hi, l1, p2lo, p2hi, l2, total, x, cand
    cdef int tries
    if has_prev:
        d1 = ycur - gprev
        u1 = d1 * d1 - log(_next_nonzero(rng)) / lam
        su1 = sqrt(u1)
        a = gprev - su1
        b = gprev + su1
        if a > wlo:
            wlo = a
        if b < whi:
            whi = b
    if not has_next:
        if whi <= wlo:
            return ycur
        width = whi - wlo
        for tries in range(MAX_POSITION_TRIES):
            cand = wlo + _next(rng) * width
            if wlo < cand < whi:
                return cand
        return ycur
    gcur = 1.0 + theta * (ycur * ycur)
    d2 = ynext - gcur
    u2 = d2 * d2 - log(_next_nonzero(rng)) / lam
    su2 = sqrt(u2)
    s = (ynext + su2 - 1.0) / theta
    r = (ynext - su2 - 1.0) / theta
    if r <= 0.0:
        return ycur
    sr = sqrt(r)
    if s <= 0.0:
        p1lo = wlo if wlo > -sr else -sr
        p1hi = whi if whi < sr else sr
        l1 = p1hi - p1lo
        if l1 < 0.0:
            l1 = 0.0
        p2lo = 0.0
        p2hi = 0.0
        l2 = 0.0
    else:
        ss = sqrt(s)
        p1lo = wlo if wlo > -sr else -sr
        p1hi = whi if whi < -ss else -ss
        l1 = p1hi - p1lo
        if l1 < 0.0:
            l1 = 0.0
        p2lo = wlo if wlo > ss else ss
        p2hi = whi if whi < sr else sr
        l2 = p2hi - p2lo
        if l2 < 0.0:
            l2 = 0.0
    total = l1 + l2
    if total <= 0.0:
        return ycur
    for tries in range(MAX_POSITION_TRIES):
        x = _next(rng) * total
        if x < l1:
            cand = p1lo + x
            if p1lo < cand < p1hi:
                return cand
        else:
            cand = p2lo + (x - l1)
            if p2lo < cand < p2hi:
                return cand
    return ycur


cdef void _sweep(bitgen_t *rng, double[::1] y, double theta, double lam,
                 double[::1] lo, double[::1] hi) noexcept nogil:
    cdef Py_ssize_t n = y.shape[0] - 1
    cdef Py_ssize_t i
    cdef double gprev
    y[0] = _site_update(rng, y[0], theta, lam, lo[0], hi[0],
                        0.0, False, y[1], True)
    gprev = 1.0 + theta * (y[0] * y[0])
    for i in range(1, n):
        y[i] = _site_update(rng, y[i], theta, lam, lo[i], hi[i],
                            gprev, True, y[i + 1], True)
        gprev = 1.0 + theta * (y[i] * y[i])
    y[n] = _site_update(rng, y[n], theta, lam, lo[n], hi[n],
                        gprev, True, 0.0, False)


def gibbs_sweep(double[::1] y, double theta, double lam,
                double[::1] lo, double[::1] hi, object gen):
    """One in-place pass over sites 0..n."""
    cdef bitgen_t *rng = _bitgen(gen)
    with gen.bit_generator.lock:
        _sweep(rng, y, theta, lam, lo, hi)


cdef inline bint _cell_hit(unsigned char bit, double z) noexcept nogil:
    if bit:
        return 0.0 <= z < 1.0
    return -1.0 < z < 0.0


cdef long long _ces(double theta, double[::1] cand,
                    const unsigned char[::1] bits) noexcept nogil:
    cdef Py_ssize_t n = bits.shape[0]
    cdef Py_ssize_t i, j
    cdef long long total = 0
    cdef double z
    for i in range(n):
        z = cand[i]
        for j in range(i, n):
            z = 1.0 + theta * (z * z)
            if not _cell_hit(bits[j], z):
                break
            total += 1
    return total


def ces_value(double theta, double[::1] cand, const unsigned char[::1] bits):
    """Cumulative estimating strength of a candidate vector."""
    return _ces(theta, cand, bits)


def strength_profile(double theta, double[::1] cand,
                     const unsigned char[::1] bits, long long[::1] per_index):
    """Fill per-index strengths (length n+1, last entry 0); return their sum."""
    cdef Py_ssize_t n = bits.shape[0]
    cdef Py_ssize_t i, j
    cdef long long total = 0
    cdef long long k
    cdef double z
    for i in range(n):
        z = cand[i]
        k = 0
        for j in range(i, n):
            z = 1.0 + theta * (z * z)
            if not _cell_hit(bits[j], z):
                break
            k += 1
        per_index[i] = k
        total += k
    per_index[n] = 0
    return total


def run_strength_chain(double theta, double lam, const unsigned char[::1] bits,
                       double[::1] lo, double[::1] hi,
                       double[::1] y, double[::1] running_sum,
                       long burn_in, long total_sweeps, long ces_stride,
                       object gen, bint collect_trace=False):
    """Sweep the chain, tracking the best-CES running-average candidate.

    Same contract as the pure-Python reference: the running average starts
    at sweep 1 and is never reset, burn-in only gates scoring, the final
    sweep is always scored, and the y_0 accumulator folds the sign symmetry
    of the even map (the data fix y_0 only up to sign).
    """
    cdef Py_ssize_t n1 = y.shape[0]
    cand_arr = np.empty(n1)
    best_arr = np.empty(n1)
    cdef double[::1] cand = cand_arr
    cdef double[::1] best = best_arr
    cdef long long best_ces = -1
    cdef long best_sweep = 0
    cdef long long ces
    cdef long sweep
    cdef Py_ssize_t i
    cdef bitgen_t *rng = _bitgen(gen)
    trace = [] if collect_trace else None
    with gen.bit_generator.lock:
        for sweep in range(1, total_sweeps + 1):
            _sweep(rng, y, theta, lam, lo, hi)
            running_sum[0] += y[0] if y[0] >= 0.0 else -y[0]
            for i in range(1, n1):
                running_sum[i] += y[i]
            if (sweep > burn_in and sweep % ces_stride == 0) or sweep == total_sweeps:
                for i in range(n1):
                    cand[i] = running_sum[i] / (<double> sweep)
                ces = _ces(theta, cand, bits)
                if ces > best_ces:
                    best_ces = ces
                    best_sweep = sweep
                    for i in range(n1):
                        best[i] = cand[i]
                if collect_trace:
                    trace.append((<double> sweep, <double> ces, cand[0]))
    trace_arr = np.array(trace) if collect_trace else None
    return best_ces, best_sweep, best_arr, trace_arr


cdef double _tail_draw_c(bitgen_t *rng, double a, double b) except? -1e308:
    cdef double alpha = 0.5 * (a + sqrt(a * a + 4.0))
    cdef double z, q2
    cdef long tries
    for tries in range(100_000):
        z = a - log(_next_nonzero(rng)) / alpha
        q2 = _next(rng)
        if z <= b and q2 <= exp(-0.5 * (z - alpha) * (z - alpha)):
            return z
    raise TailMassError("tail rejection failed to accept")


cdef double _truncnorm_draw(bitgen_t *rng, double mean, double sd,
                            double lo, double hi) except? -1e308:
    cdef double a = (lo - mean) / sd
    cdef double b = (hi - mean) / sd
    cdef double pa, pb, u, x
    if (a > MAX_TAIL_Z and b > MAX_TAIL_Z) or (a < -MAX_TAIL_Z and b < -MAX_TAIL_Z):
        raise TailMassError(
            "truncation interval lies more than 40 standard deviations "
            "from the conditional mean on both ends")
    if a >= TAIL_Z:
        return mean + sd * _tail_draw_c(rng, a, b)
    if b <= -TAIL_Z:
        return mean - sd * _tail_draw_c(rng, -b, -a)
    pa = ndtr(a)
    pb = ndtr(b)
    while True:
        u = _next(rng)
        x = ndtri(pa + u * (pb - pa))
        if a < x < b:
            return mean + sd * x


def truncated_normal_draw(object gen, double mean, double sd,
                          double lo, double hi):
    """Normal(mean, sd**2) conditioned on (lo, hi)."""
    cdef bitgen_t *rng = _bitgen(gen)
    with gen.bit_generator.lock:
        return _truncnorm_draw(rng, mean, sd, lo, hi)


cdef double _polish_sweep(bitgen_t *rng, double[::1] y, double theta,
                          double lam, double sigma,
                          double[::1] lo, double[::1] hi,
                          double trunc_lo, double trunc_hi) except? -1e308:
    cdef Py_ssize_t n1 = y.shape[0]
    cdef Py_ssize_t j
    cdef double sxy = 0.0
    cdef double sxx = 0.0
    cdef double b, mu, sd
    for j in range(1, n1):
        b = y[j - 1] * y[j - 1]
        sxy += (y[j] - 1.0) * b
        sxx += b * b
    if sxx <= 0.0:
        raise DegenerateConditionalError(
            "all predecessor values are zero; the parameter conditional "
            "is flat")
    mu = sxy / sxx
    sd = sigma / sqrt(sxx)
    theta = _truncnorm_draw(rng, mu, sd, trunc_lo, trunc_hi)
    _sweep(rng, y, theta, lam, lo, hi)
    return theta


def polish_sweep(double[::1] y, double theta, double lam, double sigma,
                 double[::1] lo, double[::1] hi,
                 double trunc_lo, double trunc_hi, object gen):
    """Truncated-normal parameter draw, then one site sweep; returns theta."""
    cdef bitgen_t *rng = _bitgen(gen)
    with gen.bit_generator.lock:
        return _polish_sweep(rng, y, theta, lam, sigma, lo, hi,
                             trunc_lo, trunc_hi)


def run_polish(double[::1] y, double theta0, double lam, double sigma,
               double[::1] lo, double[::1] hi,
               double trunc_lo, double trunc_hi,
               long sweeps, long burn_in, long trace_stride, object gen):
    """Run the parameter-augmented chain; returns post-burn-in ergodic means
    of (theta, y0) plus cumulative-mean traces at the stride cadence."""
    cdef double theta = theta0
    cdef double sum_t_post = 0.0
    cdef double sum_y0_post = 0.0
    cdef long n_post = 0
    cdef double sum_t_all = 0.0
    cdef double sum_y0_all = 0.0
    cdef long sweep
    cdef bitgen_t *rng = _bitgen(gen)
    trace = []
    with gen.bit_generator.lock:
        for sweep in range(1, sweeps + 1):
            theta = _polish_sweep(rng, y, theta, lam, sigma, lo, hi,
                                  trunc_lo, trunc_hi)
            sum_t_all += theta
            sum_y0_all += y[0]
            if sweep > burn_in:
                n_post += 1
                sum_t_post += theta
                sum_y0_post += y[0]
            if sweep % trace_stride == 0 or sweep == sweeps:
                trace.append((<double> sweep, sum_t_all / sweep,
                              sum_y0_all / sweep))
    theta_hat = sum_t_post / n_post
    y0_hat = sum_y0_post / n_post
    return theta_hat, y0_hat, np.array(trace)
