"""End-to-end orchestration: simulate -> estimate -> polish, with artifacts.

Every stage writes its outputs as plain CSV/text files in the output
directory; a whole run is reproducible byte-for-byte from the master seed.
Stream assignment: grid point s of level l uses stream 1000*l + s, the
full-data candidate chain uses stream 0, the polishing chain stream 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .dynamics import THETA_INTERVAL, iterate, simulate_symbolic
from .errors import GridEdgeError, InverseDomainError
from .grid_search import GridSpec, ZoomResult, run_zooming
from .polish_mcmc import PolishConfig, PolishEstimate, run_polish
from .samplers import (POLISH_STREAM_ID, PROFILE_STREAM_ID, RngStream)
from .strength import (StrengthProfile, backward_refine, cumulative_strength,
                       select_anchor)
from .strength_mcmc import GibbsConfig, run_strength_chain
from .symbolic import (Interval, RefinedCells, SymbolicData, bits_from_line,
                       bits_to_line, cells_from_bits, refine_cells)

__all__ = ["RunConfig", "EstimateResult", "RunReport",
           "cmd_simulate", "cmd_estimate", "cmd_polish", "cmd_full",
           "cmd_report", "parse_config", "serialize_config",
           "load_config_file"]


@dataclass(frozen=True)
class RunConfig:
    """Flat configuration of a full run; defaults mirror the reference study."""

    true_theta: float = -1.71
    true_y0: float = 0.8
    n: int = 1000
    m: int = 600
    grid_start: float = -1.5
    grid_step: float = -0.045
    grid_points: int = 12
    levels: int = 3
    sigma: float = 1e-3
    burn_in: int = 40_000
    total_sweeps: int = 200_000
    ces_stride: int = 1
    anchor_threshold: int = 20
    epsilon: float = 5e-5
    polish_sigma: float = 1e-8
    polish_sweeps: int = 100_000
    polish_burn_in: int = -1
    polish_trace_stride: int = 100
    polish_sites: int = 0
    seed: int = 20260810
    workers: int = 1
    output_dir: str = "out"

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise ValueError("m must satisfy 1 <= m <= n")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        self.gibbs_config()  # validates the nested knobs
        self.grid_spec()

    def gibbs_config(self) -> GibbsConfig:
        return GibbsConfig(sigma=self.sigma, burn_in=self.burn_in,
                           total_sweeps=self.total_sweeps,
                           ces_stride=self.ces_stride)

    def grid_spec(self) -> GridSpec:
        return GridSpec(self.grid_start, self.grid_step, self.grid_points)

    def polish_config(self, truncation: Interval) -> PolishConfig:
        burn = None if self.polish_burn_in < 0 else self.polish_burn_in
        return PolishConfig(truncation=truncation, sigma=self.polish_sigma,
                            epsilon=self.epsilon, sweeps=self.polish_sweeps,
                            burn_in=burn,
                            trace_stride=self.polish_trace_stride)


_FIELD_TYPES = {f.name: type(f.default) for f in fields(RunConfig)}


def serialize_config(config: RunConfig) -> str:
    lines = [f"{f.name} = {getattr(config, f.name)}" for f in fields(RunConfig)]
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> RunConfig:
    """Parse `key = value` lines; blank lines and #-comments are ignored."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected `key = value`, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FIELD_TYPES:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        kind = _FIELD_TYPES[key]
        values[key] = value if kind is str else kind(value)
    return RunConfig(**values)


def load_config_file(path) -> RunConfig:
    return parse_config(Path(path).read_text())


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _fmt(x) -> str:
    """Shortest round-trip decimal of a float, as a plain Python float."""
    return repr(float(x))


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def cmd_simulate(config: RunConfig, out_dir=None) -> np.ndarray:
    """Generate the censored bit sequence and write bits.txt + cells.csv."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    bits = simulate_symbolic(config.true_theta, config.true_y0, config.n)
    data = cells_from_bits(bits)
    _write(out / "bits.txt", bits_to_line(bits) + "\n")
    _write(out / "cells.csv", _csv("index,lower,upper",
                                   ((i + 1, _fmt(c.lower), _fmt(c.upper))
                                    for i, c in enumerate(data.cells))))
    return bits


def _zoom_with_restarts(config: RunConfig, data_m: SymbolicData,
                        rng: RngStream, max_restarts: int = 2) -> ZoomResult:
    """Run the zoom; on a grid-edge abort, restart once or twice with the
    initial grid shifted by half a step (the named error instructs exactly
    such a restart).  Deterministic for a fixed seed."""
    grid = config.grid_spec()
    for attempt in range(max_restarts + 1):
        try:
            return run_zooming(grid, config.levels, data_m,
                               config.gibbs_config(), rng,
                               workers=config.workers)
        except GridEdgeError:
            if attempt == max_restarts:
                raise
            shifted = grid.start - grid.step / 2.0
            last = shifted + grid.step * (grid.points - 1)
            if not (THETA_INTERVAL.contains(shifted)
                    and THETA_INTERVAL.contains(last)):
                shifted = grid.start + grid.step / 2.0
            grid = GridSpec(shifted, grid.step, grid.points)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class EstimateResult:
    zoom: ZoomResult
    profile: StrengthProfile
    kappa: int
    ybar: np.ndarray
    ytilde: np.ndarray
    profile_ces: int


def _anchor_and_refine(theta_star: float, ybar: np.ndarray,
                       profile: StrengthProfile,
                       threshold: int) -> tuple[int, np.ndarray]:
    """Select the anchor and refine backwards, discarding tail anchors that
    the inverse walk cannot cross.

    When theta_star sits on the shallow side of the truth, the data may
    require orbit values below the map's reachable minimum 1 - |theta_star|;
    the inverse walk then leaves the domain at some index, and any anchor
    beyond that index is unusable.
    """
    per = profile.per_index.copy()
    kappa = select_anchor(profile, threshold)
    while True:
        try:
            return kappa, backward_refine(theta_star, ybar, kappa)
        except InverseDomainError as exc:
            if exc.index is None:
                raise
            per[exc.index + 1:] = 0
            kappa = select_anchor(StrengthProfile(per, profile.ces), threshold)


def cmd_estimate(config: RunConfig, bits: np.ndarray,
                 out_dir=None) -> EstimateResult:
    """Zoom on the length-m prefix, then anchor and refine on the full data."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    if len(bits) < config.m:
        raise ValueError(f"need at least m={config.m} bits, got {len(bits)}")
    data_full = cells_from_bits(bits)
    data_m = data_full.prefix(config.m)
    rng = RngStream(config.seed)
    zoom_result = _zoom_with_restarts(config, data_m, rng)
    for level, table in enumerate(zoom_result.level_tables, start=1):
        _write(out / f"grid_level{level}.csv",
               _csv("theta,ces", ((_fmt(t), int(c)) for t, c, _ in table)))

    profile_chain = run_strength_chain(zoom_result.theta_star, data_full,
                                       config.gibbs_config(),
                                       rng.split(PROFILE_STREAM_ID))
    ybar = profile_chain.candidate
    profile = cumulative_strength(zoom_result.theta_star, ybar, data_full)
    _write(out / "strengths.csv",
           _csv("index,strength",
                ((i, int(s)) for i, s in enumerate(profile.per_index))))
    kappa, ytilde = _anchor_and_refine(zoom_result.theta_star, ybar, profile,
                                       config.anchor_threshold)
    _write(out / "candidate.csv",
           _csv("index,ybar,ytilde",
                ((i, _fmt(ybar[i]), _fmt(ytilde[i]) if i <= kappa else "")
                 for i in range(len(ybar)))))
    summary = {
        "theta_star": _fmt(zoom_result.theta_star),
        "truncation_lo": _fmt(zoom_result.truncation.lower),
        "truncation_hi": _fmt(zoom_result.truncation.upper),
        "zoom_y0": _fmt(zoom_result.y0),
        "kappa": kappa,
        "profile_ces": profile.ces,
        "m": config.m,
        "n": config.n,
    }
    _write(out / "estimate.txt",
           "".join(f"{k} = {v}\n" for k, v in summary.items()))
    return EstimateResult(zoom=zoom_result, profile=profile, kappa=kappa,
                          ybar=ybar, ytilde=ytilde, profile_ces=profile.ces)


def _polish_inputs(config: RunConfig, estimate: EstimateResult,
                   bits: np.ndarray) -> tuple[np.ndarray, RefinedCells, PolishConfig]:
    sites = config.polish_sites if config.polish_sites > 0 else estimate.kappa
    sites = min(sites, estimate.kappa)
    center = estimate.ytilde[:sites + 1]
    cells = refine_cells(center, config.epsilon, cells_from_bits(bits))
    return center, cells, config.polish_config(estimate.zoom.truncation)


def cmd_polish(config: RunConfig, estimate: EstimateResult, bits: np.ndarray,
               out_dir=None) -> PolishEstimate:
    """Polish (theta, y0) on refined cells from the backward-refined candidate."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    center, cells, pconfig = _polish_inputs(config, estimate, bits)
    result = run_polish(estimate.zoom.theta_star, center, cells, pconfig,
                        RngStream(config.seed, POLISH_STREAM_ID))
    _write(out / "polish_trace.csv",
           _csv("sweep,theta_mean,y0_mean",
                ((int(s), _fmt(t), _fmt(y)) for s, t, y in
                 zip(result.trace_sweeps, result.theta_trace, result.y0_trace))))
    _write(out / "polish.txt",
           f"theta_hat = {_fmt(result.theta_hat)}\n"
           f"y0_hat = {_fmt(result.y0_hat)}\n"
           f"sites = {len(center) - 1}\n")
    return result


def cmd_polish_from_artifacts(config: RunConfig, out_dir=None) -> PolishEstimate:
    """Run the polish stage from the estimate artifacts already on disk."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    bits = load_bits(out)
    est = load_estimate(out)
    ybar, ytilde, kappa = load_candidate(out)
    truncation = Interval(float(est["truncation_lo"]),
                          float(est["truncation_hi"]))
    theta_star = float(est["theta_star"])
    dummy_zoom = ZoomResult(theta_star=theta_star, truncation=truncation,
                            candidate=ybar, ces_by_theta=(), level_tables=())
    profile = StrengthProfile(np.zeros(len(ybar), dtype=np.int64),
                              int(est.get("profile_ces", 0)))
    estimate = EstimateResult(zoom=dummy_zoom, profile=profile, kappa=kappa,
                              ybar=ybar, ytilde=ytilde,
                              profile_ces=profile.ces)
    return cmd_polish(config, estimate, bits, out)


@dataclass(frozen=True)
class RunReport:
    config: RunConfig
    zoom: ZoomResult
    profile: StrengthProfile
    kappa: int
    ybar: np.ndarray
    ytilde: np.ndarray
    polish: PolishEstimate
    timings: dict

    def render(self) -> str:
        cfg = self.config
        lines = ["symbolic-sequence estimation report",
                 "===================================", ""]
        lines.append(f"data: n={cfg.n} bits simulated from theta={cfg.true_theta}, "
                     f"y0={cfg.true_y0} (strength stage uses the first m={cfg.m})")
        lines.append(f"master seed: {cfg.seed}")
        lines.append("")
        lines.append("grid zoom (argmax per level):")
        for level, table in enumerate(self.zoom.level_tables, start=1):
            best = max(table, key=lambda tc: tc[1])
            lines.append(f"  level {level}: theta={best[0]!r} ces={best[1]} "
                         f"y0={best[2]!r}")
        lines.append(f"theta_star = {self.zoom.theta_star!r}")
        lines.append(f"truncation = ({self.zoom.truncation.lower!r}, "
                     f"{self.zoom.truncation.upper!r})")
        lines.append(f"zoom y0    = {self.zoom.y0!r}")
        lines.append("")
        lines.append(f"anchor kappa = {self.kappa} "
                     f"(strength threshold {cfg.anchor_threshold})")
        lines.append(f"full-data CES at theta_star = {self.profile.ces}")
        true_orbit = iterate(cfg.true_theta, cfg.true_y0, 4).full()
        lines.append("")
        lines.append("first five sites (true, averaged, refined):")
        for i in range(min(5, len(self.ytilde))):
            lines.append(f"  i={i}: y*={true_orbit[i]:+.8f} "
                         f"ybar={self.ybar[i]:+.8f} (err {abs(self.ybar[i]-true_orbit[i]):.2e}) "
                         f"ytilde={self.ytilde[i]:+.8f} (err {abs(self.ytilde[i]-true_orbit[i]):.2e})")
        lines.append("")
        lines.append(f"polish: theta_hat = {self.polish.theta_hat!r}")
        lines.append(f"        y0_hat    = {self.polish.y0_hat!r}")
        lines.append(f"        |theta_hat - true| = "
                     f"{abs(self.polish.theta_hat - cfg.true_theta):.3e}")
        lines.append(f"        |y0_hat - true|    = "
                     f"{abs(self.polish.y0_hat - cfg.true_y0):.3e}")
        lines.append("")
        lines.append("wall-clock timings (s):")
        for stage, dt in self.timings.items():
            lines.append(f"  {stage}: {dt:.2f}")
        return "\n".join(lines) + "\n"


def cmd_full(config: RunConfig, out_dir=None) -> RunReport:
    """simulate -> estimate -> polish -> report, one master seed throughout."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    timings = {}
    t0 = time.perf_counter()
    bits = cmd_simulate(config, out)
    timings["simulate"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    estimate = cmd_estimate(config, bits, out)
    timings["estimate"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    polish = cmd_polish(config, estimate, bits, out)
    timings["polish"] = time.perf_counter() - t0
    report = RunReport(config=config, zoom=estimate.zoom,
                       profile=estimate.profile, kappa=estimate.kappa,
                       ybar=estimate.ybar, ytilde=estimate.ytilde,
                       polish=polish, timings=timings)
    _write(out / "report.txt", report.render())
    _write(out / "config.txt", serialize_config(config))
    return report


def load_bits(out_dir) -> np.ndarray:
    return bits_from_line((Path(out_dir) / "bits.txt").read_text())


def load_estimate(out_dir) -> dict:
    """Key-value summary written by cmd_estimate (empty if absent)."""
    path = Path(out_dir) / "estimate.txt"
    if not path.exists():
        return {}
    out = {}
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def load_candidate(out_dir) -> tuple[np.ndarray, np.ndarray, int]:
    """(ybar, ytilde, kappa) from candidate.csv."""
    lines = (Path(out_dir) / "candidate.csv").read_text().splitlines()
    ybar, ytilde = [], []
    for line in lines[1:]:
        _, b, t = line.split(",")
        ybar.append(float(b))
        if t:
            ytilde.append(float(t))
    return np.array(ybar), np.array(ytilde), len(ytilde) - 1


def cmd_report(out_dir) -> str:
    """Re-render a summary from the artifacts already on disk."""
    out = Path(out_dir)
    est = load_estimate(out)
    lines = ["artifact summary", "================", ""]
    bits_path = out / "bits.txt"
    if bits_path.exists():
        bits = load_bits(out)
        ones = int(bits.sum())
        lines.append(f"bits.txt: n={len(bits)} ({ones} ones, {len(bits)-ones} zeros)")
    for key in ("theta_star", "truncation_lo", "truncation_hi", "zoom_y0",
                "kappa", "profile_ces", "m", "n"):
        if key in est:
            lines.append(f"{key} = {est[key]}")
    polish_path = out / "polish.txt"
    if polish_path.exists():
        lines.append("")
        lines.append(polish_path.read_text().rstrip())
    text = "\n".join(lines) + "\n"
    _write(out / "report.txt", text)
    return text
