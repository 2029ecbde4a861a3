"""Zooming grid maximization of the strength objective over theta.

Each level scores every grid point with an independent chain, then the
next level spans the two neighbors of the maximizer with the same number
of points.  The final maximizer's neighbor bracket is the truncation
interval handed to the polishing stage.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import THETA_INTERVAL
from .errors import GridEdgeError
from .samplers import RngStream, grid_stream_id
from .strength_mcmc import GibbsConfig, run_strength_chain
from .symbolic import Interval, SymbolicData, cells_from_bits

__all__ = ["GridSpec", "GridPointResult", "ZoomResult",
           "evaluate_grid", "zoom", "run_zooming"]


@dataclass(frozen=True)
class GridSpec:
    """Arithmetic grid start + step*s, s = 0..points-1 (step < 0 descends)."""

    start: float
    step: float
    points: int = 12

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("a grid needs at least 3 points")
        if self.step == 0.0:
            raise ValueError("step must be nonzero")
        for s in (0, self.points - 1):
            theta = self.start + self.step * s
            if not THETA_INTERVAL.contains(theta):
                raise ValueError(
                    f"grid point {theta!r} outside the parameter space "
                    f"{THETA_INTERVAL}")

    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.points)

    def point(self, s: int) -> float:
        return self.start + self.step * s


@dataclass(frozen=True)
class GridPointResult:
    theta: float
    best_ces: int
    candidate: np.ndarray = field(repr=False)

    @property
    def y0(self) -> float:
        return float(self.candidate[0])


@dataclass(frozen=True)
class ZoomResult:
    """Final maximizer, its neighbor bracket, and per-level score tables
    with rows (theta, best_ces, y0)."""

    theta_star: float
    truncation: Interval
    candidate: np.ndarray
    ces_by_theta: tuple[tuple[float, int, float], ...]
    level_tables: tuple[tuple[tuple[float, int, float], ...], ...]

    @property
    def y0(self) -> float:
        return float(self.candidate[0])


def _evaluate_point(args) -> tuple[int, float, int, np.ndarray]:
    # Module-level so worker processes can unpickle it.
    index, theta, bits, config, seed, stream = args
    data = cells_from_bits(bits)
    rng = RngStream(seed, stream)
    res = run_strength_chain(theta, data, config, rng)
    return index, theta, res.best_ces, res.candidate


def evaluate_grid(grid: GridSpec, data: SymbolicData, config: GibbsConfig,
                  rng: RngStream, level: int = 1,
                  workers: int = 1) -> list[GridPointResult]:
    """Score every grid point with an independent chain.

    Point ``s`` of level ``level`` always uses the stream
    ``1000*level + s`` of the master seed, so results do not depend on the
    worker count or scheduling.
    """
    tasks = [(s, grid.point(s), data.bits, config, rng.seed,
              grid_stream_id(level, s)) for s in range(grid.points)]
    results: list[GridPointResult | None] = [None] * grid.points
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, theta, ces, candidate in pool.map(_evaluate_point, tasks):
                results[index] = GridPointResult(theta, ces, candidate)
    else:
        for task in tasks:
            index, theta, ces, candidate = _evaluate_point(task)
            results[index] = GridPointResult(theta, ces, candidate)
    return results  # type: ignore[return-value]


def zoom(grid: GridSpec, argmax_index: int) -> GridSpec:
    """Next grid: spans the maximizer's two neighbors with the same point
    count.  Raises GridEdgeError if the maximizer has no interior bracket."""
    if argmax_index <= 0 or argmax_index >= grid.points - 1:
        raise GridEdgeError(argmax_index, grid.points)
    new_start = grid.point(argmax_index - 1)
    new_step = 2.0 * grid.step / (grid.points - 1)
    return GridSpec(new_start, new_step, grid.points)


def _argmax(table: list[GridPointResult]) -> int:
    ces = np.array([r.best_ces for r in table])
    return int(np.argmax(ces))


def run_zooming(initial: GridSpec, levels: int, data: SymbolicData,
                config: GibbsConfig, rng: RngStream,
                workers: int = 1) -> ZoomResult:
    """Iterate evaluate-then-zoom for the given number of levels.

    The returned truncation interval is the neighbor bracket of the final
    maximizer (ordered low to high).
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    grid = initial
    level_tables = []
    table: list[GridPointResult] = []
    best = 0
    for level in range(1, levels + 1):
        table = evaluate_grid(grid, data, config, rng, level=level,
                              workers=workers)
        level_tables.append(tuple((r.theta, r.best_ces, r.y0) for r in table))
        best = _argmax(table)
        if level < levels:
            grid = zoom(grid, best)
    if best <= 0 or best >= grid.points - 1:
        raise GridEdgeError(best, grid.points)
    neighbors = sorted((grid.point(best - 1), grid.point(best + 1)))
    return ZoomResult(
        theta_star=table[best].theta,
        truncation=Interval(neighbors[0], neighbors[1]),
        candidate=table[best].candidate,
        ces_by_theta=level_tables[-1],
        level_tables=tuple(level_tables),
    )
