"""Pure-Python sampling kernels; the reference the compiled core must match.

Every function here has a bit-identical counterpart in ``symest._kernels``
(the Cython extension).  Both consume the same Philox uniform stream in the
same order and perform the same IEEE-754 double operations, so results are
interchangeable down to the last bit; a test and the kernel benchmark both
assert this.  Keep the two files in lockstep when changing either.

Update scheme for one site y_i (the auxiliary/slice construction):
draw an exponential level above the squared backward residual to get a
window around g(theta, y_{i-1}); draw a second level above the squared
forward residual to bound y_i**2 between two roots, giving one or two
admissible intervals; then draw y_i uniformly over the intersection.
Site 0 has no backward factor, site n no forward factor.  Numerically
empty supports keep the current value (a rounding-induced, measure-zero
event), which preserves the chain's stationary law.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DegenerateConditionalError, TailMassError

BACKEND_NAME = "python"

_TAIL_Z = 8.0
_MAX_TAIL_Z = 40.0
_MAX_POSITION_TRIES = 100


def _next_nonzero(gen) -> float:
    q = gen.random()
    while q == 0.0:
        q = gen.random()
    return q


def _site_update(gen, ycur: float, theta: float, lam: float,
                 lo: float, hi: float,
                 gprev: float, has_prev: bool,
                 ynext: float, has_next: bool) -> float:
    wlo = lo
    whi = hi
    if has_prev:
        d1 = ycur - gprev
        u1 = d1 * d1 - math.log(_next_nonzero(gen)) / lam
        su1 = math.sqrt(u1)
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
        for _ in range(_MAX_POSITION_TRIES):
            cand = wlo + gen.random() * width
            if wlo < cand < whi:
                return cand
        return ycur
    gcur = 1.0 + theta * (ycur * ycur)
    d2 = ynext - gcur
    u2 = d2 * d2 - math.log(_next_nonzero(gen)) / lam
    su2 = math.sqrt(u2)
    s = (ynext + su2 - 1.0) / theta
    r = (ynext - su2 - 1.0) / theta
    if r <= 0.0:
        return ycur
    sr = math.sqrt(r)
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
        ss = math.sqrt(s)
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
    for _ in range(_MAX_POSITION_TRIES):
        x = gen.random() * total
        if x < l1:
            cand = p1lo + x
            if p1lo < cand < p1hi:
                return cand
        else:
            cand = p2lo + (x - l1)
            if p2lo < cand < p2hi:
                return cand
    return ycur


def gibbs_sweep(y: np.ndarray, theta: float, lam: float,
                lo: np.ndarray, hi: np.ndarray, gen) -> None:
    """One in-place pass over sites 0..n."""
    n = y.shape[0] - 1
    y[0] = _site_update(gen, y[0], theta, lam, lo[0], hi[0],
                        0.0, False, y[1], True)
    gprev = 1.0 + theta * (y[0] * y[0])
    for i in range(1, n):
        y[i] = _site_update(gen, y[i], theta, lam, lo[i], hi[i],
                            gprev, True, y[i + 1], True)
        gprev = 1.0 + theta * (y[i] * y[i])
    y[n] = _site_update(gen, y[n], theta, lam, lo[n], hi[n],
                        gprev, True, 0.0, False)


def _cell_hit(bit: int, z: float) -> bool:
    if bit:
        return 0.0 <= z < 1.0
    return -1.0 < z < 0.0


def ces_value(theta: float, cand: np.ndarray, bits: np.ndarray) -> int:
    """Cumulative estimating strength of a candidate vector."""
    n = bits.shape[0]
    total = 0
    for i in range(n):
        z = cand[i]
        for j in range(i, n):
            z = 1.0 + theta * (z * z)
            if not _cell_hit(bits[j], z):
                break
            total += 1
    return total


def strength_profile(theta: float, cand: np.ndarray, bits: np.ndarray,
                     per_index: np.ndarray) -> int:
    """Fill per-index strengths (length n+1, last entry 0); return their sum."""
    n = bits.shape[0]
    total = 0
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


def run_strength_chain(theta: float, lam: float, bits: np.ndarray,
                       lo: np.ndarray, hi: np.ndarray,
                       y: np.ndarray, running_sum: np.ndarray,
                       burn_in: int, total_sweeps: int, ces_stride: int,
                       gen, collect_trace: bool = False):
    """Sweep the chain, tracking the best-CES running-average candidate.

    The running average accumulates from sweep 1 and is never reset; burn-in
    only gates when its CES is scored.  The final sweep is always scored so
    any stride yields at least one evaluation.  The y_0 accumulator folds
    the sign symmetry of the even map (see inline note).  Returns
    (best_ces, best_sweep, best_candidate, trace) with trace rows
    (sweep, ces, running_y0) when requested.
    """
    n1 = y.shape[0]
    cand = np.empty(n1)
    best_candidate = np.empty(n1)
    best_ces = -1
    best_sweep = 0
    trace = [] if collect_trace else None
    for sweep in range(1, total_sweeps + 1):
        gibbs_sweep(y, theta, lam, lo, hi, gen)
        # The map is even in y, so the data fix y_0 only up to sign and its
        # conditional is symmetric bimodal; accumulate |y_0| to report the
        # positive representative.
        running_sum[0] += y[0] if y[0] >= 0.0 else -y[0]
        running_sum[1:] += y[1:]
        if (sweep > burn_in and sweep % ces_stride == 0) or sweep == total_sweeps:
            np.divide(running_sum, float(sweep), out=cand)
            ces = ces_value(theta, cand, bits)
            if ces > best_ces:
                best_ces = ces
                best_sweep = sweep
                best_candidate[:] = cand
            if collect_trace:
                trace.append((float(sweep), float(ces), cand[0]))
    trace_arr = np.array(trace) if collect_trace else None
    return best_ces, best_sweep, best_candidate, trace_arr


def truncated_normal_draw(gen, mean: float, sd: float,
                          lo: float, hi: float) -> float:
    """Normal(mean, sd**2) conditioned on (lo, hi); same algorithm as
    samplers.sample_truncated_normal, shared by both backends."""
    a = (lo - mean) / sd
    b = (hi - mean) / sd
    if (a > _MAX_TAIL_Z and b > _MAX_TAIL_Z) or (a < -_MAX_TAIL_Z and b < -_MAX_TAIL_Z):
        raise TailMassError(
            "truncation interval lies more than 40 standard deviations "
            "from the conditional mean on both ends")
    if a >= _TAIL_Z:
        return mean + sd * _tail_draw(gen, a, b)
    if b <= -_TAIL_Z:
        return mean - sd * _tail_draw(gen, -b, -a)
    pa = ndtr(a)
    pb = ndtr(b)
    while True:
        u = gen.random()
        x = ndtri(pa + u * (pb - pa))
        if a < x < b:
            return mean + sd * x


def _tail_draw(gen, a: float, b: float) -> float:
    alpha = 0.5 * (a + math.sqrt(a * a + 4.0))
    for _ in range(100_000):
        z = a - math.log(_next_nonzero(gen)) / alpha
        q2 = gen.random()
        if z <= b and q2 <= math.exp(-0.5 * (z - alpha) * (z - alpha)):
            return z
    raise TailMassError("tail rejection failed to accept")


def polish_sweep(y: np.ndarray, theta: float, lam: float, sigma: float,
                 lo: np.ndarray, hi: np.ndarray,
                 trunc_lo: float, trunc_hi: float, gen) -> float:
    """Truncated-normal parameter draw, then one site sweep; returns theta."""
    n1 = y.shape[0]
    sxy = 0.0
    sxx = 0.0
    for j in range(1, n1):
        b = y[j - 1] * y[j - 1]
        sxy += (y[j] - 1.0) * b
        sxx += b * b
    if sxx <= 0.0:
        raise DegenerateConditionalError(
            "all predecessor values are zero; the parameter conditional "
            "is flat")
    mu = sxy / sxx
    sd = sigma / math.sqrt(sxx)
    theta = truncated_normal_draw(gen, mu, sd, trunc_lo, trunc_hi)
    gibbs_sweep(y, theta, lam, lo, hi, gen)
    return theta


def run_polish(y: np.ndarray, theta0: float, lam: float, sigma: float,
               lo: np.ndarray, hi: np.ndarray,
               trunc_lo: float, trunc_hi: float,
               sweeps: int, burn_in: int, trace_stride: int, gen):
    """Run the parameter-augmented chain; returns post-burn-in ergodic means
    of (theta, y0) plus cumulative-mean traces at the stride cadence."""
    theta = theta0
    sum_t_post = 0.0
    sum_y0_post = 0.0
    n_post = 0
    sum_t_all = 0.0
    sum_y0_all = 0.0
    trace = []
    for sweep in range(1, sweeps + 1):
        theta = polish_sweep(y, theta, lam, sigma, lo, hi,
                             trunc_lo, trunc_hi, gen)
        sum_t_all += theta
        sum_y0_all += y[0]
        if sweep > burn_in:
            n_post += 1
            sum_t_post += theta
            sum_y0_post += y[0]
        if sweep % trace_stride == 0 or sweep == sweeps:
            trace.append((float(sweep), sum_t_all / sweep, sum_y0_all / sweep))
    theta_hat = sum_t_post / n_post
    y0_hat = sum_y0_post / n_post
    return theta_hat, y0_hat, np.array(trace)
