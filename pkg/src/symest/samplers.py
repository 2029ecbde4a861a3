"""Random sampling primitives: reproducible streams, truncated draws, and
the two-piece uniform mixture used by the slice updates.

Streams are Philox counter-based generators keyed by (seed, stream id), so
any chain or grid point can be re-run bit-identically in isolation.  The
documented stream-splitting rule for grid evaluation is
``stream id = 1000 * grid level + grid index``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import EmptySupportError, TailMassError
from .symbolic import EMPTY_INTERVAL, Interval

__all__ = [
    "RngStream", "SlicePieces", "grid_stream_id",
    "PROFILE_STREAM_ID", "POLISH_STREAM_ID",
    "sample_uniform", "sample_truncated_exponential",
    "sample_truncated_normal", "quadratic_slice_pieces", "sample_from_pieces",
]

_MASK64 = (1 << 64) - 1

#: Stream id of the full-data candidate chain run at theta*.
PROFILE_STREAM_ID = 0
#: Stream id of the polishing chain.
POLISH_STREAM_ID = 1


def grid_stream_id(level: int, index: int) -> int:
    """Stream id for grid point ``index`` of 1-based zoom level ``level``."""
    if level < 1 or index < 0 or index >= 1000:
        raise ValueError("level must be >= 1 and 0 <= index < 1000")
    return 1000 * level + index


class RngStream:
    """A reproducible substream of a counter-based Philox generator.

    Two streams built with the same (seed, stream) produce identical draws.
    A stream is single-owner: it advances as it is consumed and must not be
    shared between concurrent chains.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        key = self.seed + (self.stream << 64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def split(self, stream: int) -> "RngStream":
        """Fresh stream with the same master seed and a new stream id."""
        return RngStream(self.seed, stream)

    def uniform(self) -> float:
        return self.generator.random()

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream={self.stream})"


def sample_uniform(rng: RngStream, interval: Interval) -> float:
    """Uniform draw strictly inside a nonempty interval."""
    if interval.is_empty() or interval.length() == 0.0:
        raise EmptySupportError(f"cannot sample from {interval}")
    lo, hi = interval.lower, interval.upper
    while True:
        x = lo + rng.uniform() * (hi - lo)
        if lo < x < hi:
            return x


def sample_truncated_exponential(rng: RngStream, lam: float, lower: float) -> float:
    """Exponential(rate lam) conditioned on exceeding ``lower``."""
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if lower < 0.0:
        raise ValueError("lower must be nonnegative")
    q = rng.uniform()
    while q == 0.0:
        q = rng.uniform()
    return lower - math.log(q) / lam


_TAIL_Z = 8.0       # beyond this, inverse-CDF loses the tail; use rejection
_MAX_TAIL_Z = 40.0  # beyond this on both ends the interval mass underflows


def _onesided_tail_draw(rng: RngStream, a: float, b: float) -> float:
    # Robert's exponential-proposal rejection for a standard normal on [a, b],
    # a >= 0.  Deterministic draw order: (q1, q2) pairs until acceptance.
    alpha = 0.5 * (a + math.sqrt(a * a + 4.0))
    for _ in range(100_000):
        q1 = rng.uniform()
        while q1 == 0.0:
            q1 = rng.uniform()
        z = a - math.log(q1) / alpha
        q2 = rng.uniform()
        if z <= b and q2 <= math.exp(-0.5 * (z - alpha) * (z - alpha)):
            return z
    raise TailMassError(f"tail rejection failed to accept on [{a}, {b}]")


def sample_truncated_normal(rng: RngStream, mean: float, variance: float,
                            interval: Interval) -> float:
    """Normal(mean, variance) conditioned on a nonempty interval.

    Uses inverse-CDF on the interval's mass; far-tail intervals fall back to
    one-sided exponential-proposal rejection.  Intervals more than 40
    standard deviations from the mean on both ends raise TailMassError.
    """
    if variance <= 0.0:
        raise ValueError("variance must be positive")
    if interval.is_empty() or interval.length() == 0.0:
        raise EmptySupportError(f"cannot sample from {interval}")
    sd = math.sqrt(variance)
    a = (interval.lower - mean) / sd
    b = (interval.upper - mean) / sd
    if (a > _MAX_TAIL_Z and b > _MAX_TAIL_Z) or (a < -_MAX_TAIL_Z and b < -_MAX_TAIL_Z):
        raise TailMassError(
            f"interval {interval} lies more than {_MAX_TAIL_Z} standard "
            f"deviations from the mean on both ends")
    if a >= _TAIL_Z:
        return mean + sd * _onesided_tail_draw(rng, a, b)
    if b <= -_TAIL_Z:
        return mean - sd * _onesided_tail_draw(rng, -b, -a)
    pa = ndtr(a)
    pb = ndtr(b)
    while True:
        u = rng.uniform()
        x = ndtri(pa + u * (pb - pa))
        if a < x < b:
            return mean + sd * x


@dataclass(frozen=True)
class SlicePieces:
    """Up to two disjoint intervals with the selection weight of the first."""

    pieces: tuple[Interval, ...]
    weight_first: float

    def total_length(self) -> float:
        return sum(p.length() for p in self.pieces)

    def contains(self, x: float) -> bool:
        return any(p.strictly_contains(x) for p in self.pieces)


def quadratic_slice_pieces(theta: float, u2: float, y_next: float,
                           window: Interval) -> SlicePieces:
    """Support of a site draw given its forward auxiliary variable.

    The constraint (y_next - 1 - theta*y**2)^2 < u2 bounds y**2 between
    s = (y_next + sqrt(u2) - 1)/theta and r = (y_next - sqrt(u2) - 1)/theta,
    giving one symmetric piece when s <= 0 and a +/- pair otherwise, each
    intersected with ``window``.
    """
    if u2 <= 0.0:
        raise ValueError("u2 must be positive")
    if theta >= 0.0:
        raise ValueError("theta must be negative")
    su2 = math.sqrt(u2)
    s = (y_next + su2 - 1.0) / theta
    r = (y_next - su2 - 1.0) / theta
    if r <= 0.0:
        raise EmptySupportError(
            f"slice level u2={u2!r} leaves no support at y_next={y_next!r}")
    sr = math.sqrt(r)
    if s <= 0.0:
        piece = window.intersect(Interval(-sr, sr))
        if piece.is_empty() or piece.length() == 0.0:
            raise EmptySupportError("slice piece does not meet the window")
        return SlicePieces((piece,), 1.0)
    ss = math.sqrt(s)
    neg = window.intersect(Interval(-sr, -ss))
    pos = window.intersect(Interval(ss, sr))
    pieces = tuple(p for p in (neg, pos)
                   if not p.is_empty() and p.length() > 0.0)
    if not pieces:
        raise EmptySupportError("slice pieces do not meet the window")
    if len(pieces) == 1:
        return SlicePieces(pieces, 1.0)
    l1, l2 = pieces[0].length(), pieces[1].length()
    return SlicePieces(pieces, l1 / (l1 + l2))


def sample_from_pieces(rng: RngStream, pieces: SlicePieces) -> float:
    """Uniform draw over the union of the slice pieces.

    A single uniform across the concatenated lengths realizes the mixture
    with the weight of ``SlicePieces``.
    """
    if len(pieces.pieces) == 1:
        return sample_uniform(rng, pieces.pieces[0])
    p1, p2 = pieces.pieces
    l1, l2 = p1.length(), p2.length()
    total = l1 + l2
    while True:
        x = rng.uniform() * total
        if x < l1:
            cand = p1.lower + x
            if p1.lower < cand < p1.upper:
                return cand
        else:
            cand = p2.lower + (x - l1)
            if p2.lower < cand < p2.upper:
                return cand
