"""The quadratic interval map: forward orbits, censored bits, inverse branches.

The map is y -> 1 + theta * y**2 on the invariant set X = (-1, 1) with
control parameter theta in [-2, 0).  It is affine in theta, which the
polishing stage exploits: g(theta, y) = alpha(y) + beta(y) * theta with
alpha = 1 and beta = y**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InverseDomainError, OrbitEscapeError, ParameterDomainError
from .symbolic import Interval, X_INTERVAL

__all__ = [
    "MapModel", "QUADRATIC_MAP", "Orbit",
    "evaluate", "iterate", "simulate_symbolic", "inverse_branch",
    "affine_alpha", "affine_beta",
]

THETA_INTERVAL = Interval(-2.0, 0.0, closed_lower=True, closed_upper=False)


def affine_alpha(y: float) -> float:
    return 1.0


def affine_beta(y: float) -> float:
    return y * y


@dataclass(frozen=True)
class MapModel:
    """Parameter space, invariant set, and affine-in-theta decomposition."""

    theta_space: Interval = THETA_INTERVAL
    invariant_set: Interval = X_INTERVAL
    affine_alpha: Callable[[float], float] = field(default=affine_alpha)
    affine_beta: Callable[[float], float] = field(default=affine_beta)


QUADRATIC_MAP = MapModel()


def _check_theta(theta: float) -> None:
    if not THETA_INTERVAL.contains(theta):
        raise ParameterDomainError(
            f"theta={theta!r} outside the parameter space {THETA_INTERVAL}")


def evaluate(theta: float, y: float) -> float:
    """One application of the map, 1 + theta * y**2."""
    _check_theta(theta)
    if not math.isfinite(y):
        raise ValueError(f"y must be finite, got {y!r}")
    return 1.0 + theta * (y * y)


@dataclass(frozen=True)
class Orbit:
    """A forward orbit y_1..y_k started below y_0 (y_0 itself excluded)."""

    theta: float
    y0: float
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def full(self) -> np.ndarray:
        """The orbit including the initial condition, y_0..y_k."""
        return np.concatenate(([self.y0], self.values))


def iterate(theta: float, y0: float, k: int) -> Orbit:
    """Iterate the map k times from y0.

    Raises OrbitEscapeError if rounding pushes an iterate strictly outside
    the closure of the invariant set.
    """
    _check_theta(theta)
    if not X_INTERVAL.contains(y0):
        raise ValueError(f"y0={y0!r} outside the invariant set {X_INTERVAL}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    values = np.empty(k)
    y = y0
    for i in range(k):
        y = 1.0 + theta * (y * y)
        if y < -1.0 or y > 1.0:
            raise OrbitEscapeError(i + 1, y)
        values[i] = y
    return Orbit(theta, y0, values)


def simulate_symbolic(theta: float, y0: float, n: int) -> np.ndarray:
    """Censored bits of the orbit: b_i = 0 when y_i < 0, else 1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    orbit = iterate(theta, y0, n)
    return (orbit.values >= 0.0).astype(np.uint8)


def inverse_branch(theta: float, y_next: float, sign: int) -> float:
    """Signed preimage of y_next: sign * sqrt((y_next - 1) / theta)."""
    _check_theta(theta)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    radicand = (y_next - 1.0) / theta
    if radicand < 0.0:
        raise InverseDomainError(
            f"no preimage: ({y_next!r} - 1)/{theta!r} is negative")
    return sign * math.sqrt(radicand)
