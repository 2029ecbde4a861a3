"""Censored symbolic observations and the interval algebra behind them.

A binary sequence ``b`` pins each unobserved orbit point into a censoring
cell: ``(-1, 0)`` for a 0 bit, ``[0, 1)`` for a 1 bit.  The polishing stage
shrinks those cells to small windows around a refined candidate orbit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CellRefinementError

__all__ = [
    "Interval", "EMPTY_INTERVAL", "X_INTERVAL", "CELL_NEG", "CELL_POS",
    "SymbolicData", "RefinedCells",
    "cells_from_bits", "refine_cells", "intersect", "length",
    "bits_to_line", "bits_from_line",
]


@dataclass(frozen=True)
class Interval:
    """A real interval with independently open/closed endpoints."""

    lower: float
    upper: float
    closed_lower: bool = False
    closed_upper: bool = False

    def is_empty(self) -> bool:
        if self.lower > self.upper:
            return True
        if self.lower == self.upper:
            return not (self.closed_lower and self.closed_upper)
        return False

    def length(self) -> float:
        if self.is_empty():
            return 0.0
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        if self.is_empty():
            return False
        above = x >= self.lower if self.closed_lower else x > self.lower
        below = x <= self.upper if self.closed_upper else x < self.upper
        return above and below

    def strictly_contains(self, x: float) -> bool:
        return self.lower < x < self.upper

    def intersect(self, other: "Interval") -> "Interval":
        if self.lower > other.lower:
            lo, clo = self.lower, self.closed_lower
        elif self.lower < other.lower:
            lo, clo = other.lower, other.closed_lower
        else:
            lo, clo = self.lower, self.closed_lower and other.closed_lower
        if self.upper < other.upper:
            hi, chi = self.upper, self.closed_upper
        elif self.upper > other.upper:
            hi, chi = other.upper, other.closed_upper
        else:
            hi, chi = self.upper, self.closed_upper and other.closed_upper
        out = Interval(lo, hi, clo, chi)
        return EMPTY_INTERVAL if out.is_empty() else out

    def __str__(self) -> str:
        left = "[" if self.closed_lower else "("
        right = "]" if self.closed_upper else ")"
        return f"{left}{self.lower!r}, {self.upper!r}{right}"


#: Canonical empty interval; all empty intersections collapse to this value.
EMPTY_INTERVAL = Interval(0.0, 0.0, False, False)

#: Invariant set of the quadratic map.
X_INTERVAL = Interval(-1.0, 1.0)

#: Censoring cell for a 0 bit.
CELL_NEG = Interval(-1.0, 0.0)

#: Censoring cell for a 1 bit; closed at 0 so the cells partition X.
CELL_POS = Interval(0.0, 1.0, closed_lower=True)


def intersect(a: Interval, b: Interval) -> Interval:
    return a.intersect(b)


def length(a: Interval) -> float:
    return a.length()


@dataclass(frozen=True)
class SymbolicData:
    """An observed bit string together with its censoring cells.

    ``cells[i]`` is the cell of observation ``i+1`` (observations are
    1-indexed; there is no observed bit for the initial condition).
    """

    bits: np.ndarray
    cells: tuple[Interval, ...]

    @property
    def n(self) -> int:
        return len(self.bits)

    def cell(self, index: int) -> Interval:
        """Cell for 1-based observation index; index 0 is the invariant set."""
        if index == 0:
            return X_INTERVAL
        return self.cells[index - 1]

    def support_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-site (lower, upper) bounds for the chain state y_0..y_n."""
        lo = np.empty(self.n + 1)
        hi = np.empty(self.n + 1)
        lo[0], hi[0] = X_INTERVAL.lower, X_INTERVAL.upper
        for i, c in enumerate(self.cells, start=1):
            lo[i], hi[i] = c.lower, c.upper
        return lo, hi

    def prefix(self, m: int) -> "SymbolicData":
        if not 1 <= m <= self.n:
            raise ValueError(f"prefix length {m} outside 1..{self.n}")
        return SymbolicData(self.bits[:m].copy(), self.cells[:m])


def cells_from_bits(bits) -> SymbolicData:
    """Build the censoring-cell sequence for a bit string."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("bits must be a nonempty 1-d sequence")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bits must contain only 0 and 1")
    cells = tuple(CELL_POS if b else CELL_NEG for b in arr)
    return SymbolicData(arr, cells)


@dataclass(frozen=True)
class RefinedCells:
    """Shrunken cells centered on a candidate orbit, one per site y_0..y_n."""

    epsilon: float
    cells: tuple[Interval, ...]

    @property
    def n_sites(self) -> int:
        return len(self.cells)

    def support_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([c.lower for c in self.cells])
        hi = np.array([c.upper for c in self.cells])
        return lo, hi


def refine_cells(center, epsilon: float, base: SymbolicData) -> RefinedCells:
    """Intersect an epsilon-window around each candidate point with its cell.

    ``center`` holds the candidate values y_0..y_k (k <= n); site 0 is
    windowed against the invariant set.  Raises CellRefinementError if any
    window misses its base cell.
    """
    center = np.asarray(center, dtype=float)
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if center.ndim != 1 or center.size == 0:
        raise ValueError("center must be a nonempty 1-d sequence")
    if center.size > base.n + 1:
        raise ValueError("candidate longer than the data allows")
    out = []
    for i, c in enumerate(center):
        window = Interval(c - epsilon, c + epsilon)
        cell = window.intersect(base.cell(i))
        if cell.is_empty() or cell.length() == 0.0:
            raise CellRefinementError(i)
        out.append(cell)
    return RefinedCells(epsilon, tuple(out))


def bits_to_line(bits) -> str:
    return "".join("1" if b else "0" for b in np.asarray(bits))


def bits_from_line(line: str) -> np.ndarray:
    text = line.strip()
    if not text or any(ch not in "01" for ch in text):
        raise ValueError("bit line must be a nonempty string of 0/1")
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
