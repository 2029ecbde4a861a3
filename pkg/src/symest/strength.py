"""Estimating-strength metrics and inverse-map refinement of candidates.

The strength of a candidate point is how many forward map iterations
started there keep landing in the observed censoring cells.  Summing the
per-index strengths gives the objective maximized over theta.  From a
high-strength anchor near the end of the sequence, the signed inverse map
re-derives the earlier orbit points far more accurately than the Gibbs
averages themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .dynamics import inverse_branch
from .errors import AnchorNotFoundError, InverseDomainError
from .symbolic import SymbolicData

__all__ = [
    "StrengthProfile", "point_strength", "cumulative_strength",
    "select_anchor", "backward_refine",
]


@dataclass(frozen=True)
class StrengthProfile:
    """Per-index strengths S_0..S_n and their sum over 0..n-1."""

    per_index: np.ndarray
    ces: int

    def __len__(self) -> int:
        return len(self.per_index)


def point_strength(theta: float, y: float, index: int, data: SymbolicData) -> int:
    """Length of the longest forward-agreement prefix from one candidate point.

    Iterates the map from ``y`` and counts how many successive iterates fall
    in the cells D_{index+1}, D_{index+2}, ...; an iterate leaving the
    invariant set simply ends the prefix.
    """
    n = data.n
    if not 0 <= index <= n:
        raise ValueError(f"index {index} outside 0..{n}")
    bits = data.bits
    z = y
    k = 0
    for j in range(index + 1, n + 1):
        z = 1.0 + theta * (z * z)
        if bits[j - 1]:
            inside = 0.0 <= z < 1.0
        else:
            inside = -1.0 < z < 0.0
        if not inside:
            break
        k += 1
    return k


def cumulative_strength(theta: float, candidate, data: SymbolicData) -> StrengthProfile:
    """Strengths of every candidate point plus their cumulative sum."""
    candidate = np.ascontiguousarray(candidate, dtype=np.float64)
    if candidate.size != data.n + 1:
        raise ValueError(
            f"candidate length {candidate.size} does not match data length "
            f"{data.n} (+1 for the initial condition)")
    per_index = np.zeros(data.n + 1, dtype=np.int64)
    ces = _backend.kernels.strength_profile(
        theta, candidate, np.ascontiguousarray(data.bits, dtype=np.uint8),
        per_index)
    return StrengthProfile(per_index, int(ces))


def select_anchor(profile: StrengthProfile, threshold: int) -> int:
    """Largest index whose strength strictly exceeds the threshold."""
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    qualifying = np.nonzero(profile.per_index > threshold)[0]
    if qualifying.size == 0:
        raise AnchorNotFoundError(
            f"no index with strength > {threshold} "
            f"(max strength {int(profile.per_index.max())})")
    return int(qualifying[-1])


def backward_refine(theta_star: float, candidate, kappa: int) -> np.ndarray:
    """Re-derive candidate points 0..kappa by walking the inverse map back
    from the anchor, keeping each original point's sign.

    Raises InverseDomainError naming the failing index when the walk leaves
    the map's range (possible when the anchor's orbit under theta_star
    cannot reach as low as the data requires).
    """
    candidate = np.asarray(candidate, dtype=float)
    if not 0 <= kappa < candidate.size:
        raise ValueError(f"kappa {kappa} outside 0..{candidate.size - 1}")
    refined = np.empty(kappa + 1)
    refined[kappa] = candidate[kappa]
    for i in range(kappa - 1, -1, -1):
        sign = 1 if candidate[i] >= 0.0 else -1
        try:
            refined[i] = inverse_branch(theta_star, refined[i + 1], sign)
        except InverseDomainError as exc:
            exc.index = i
            raise
    return refined
