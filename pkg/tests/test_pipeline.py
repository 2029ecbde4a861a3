import filecmp
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from symest.cli import main as cli_main
from symest.pipeline import (RunConfig, cmd_estimate, cmd_full, cmd_polish,
                             cmd_report, cmd_simulate, load_bits,
                             load_candidate, load_config_file, parse_config,
                             serialize_config)


def tiny_config(out_dir, **overrides) -> RunConfig:
    base = dict(n=120, m=90, levels=2, burn_in=150, total_sweeps=1200,
                polish_sweeps=1500, polish_sites=30, anchor_threshold=6,
                polish_trace_stride=50, seed=1234, output_dir=str(out_dir))
    base.update(overrides)
    return RunConfig(**base)


class TestConfig:
    def test_round_trip(self, tmp_path):
        config = tiny_config(tmp_path / "o", grid_points=9, workers=2)
        assert parse_config(serialize_config(config)) == config

    def test_defaults_round_trip(self):
        assert parse_config(serialize_config(RunConfig())) == RunConfig()

    def test_comments_and_blanks_ignored(self):
        config = parse_config("# comment\n\nn = 500\nm = 200  # inline\n")
        assert config.n == 500 and config.m == 200

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError):
            parse_config("not_a_key = 1\n")

    def test_m_cannot_exceed_n(self):
        with pytest.raises(ValueError):
            RunConfig(n=100, m=200)

    def test_file_loading(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("n = 64\nm = 32\nseed = 9\n")
        config = load_config_file(path)
        assert (config.n, config.m, config.seed) == (64, 32, 9)


class TestSimulate:
    def test_reference_prefix_bits(self, tmp_path):
        config = RunConfig(output_dir=str(tmp_path))
        bits = cmd_simulate(config)
        assert len(bits) == 1000
        assert bits[:4].tolist() == [0, 1, 0, 1]
        line = (tmp_path / "bits.txt").read_text().strip()
        assert len(line) == 1000 and line[:4] == "0101"

    def test_single_bit(self, tmp_path):
        config = tiny_config(tmp_path, n=1, m=1)
        bits = cmd_simulate(config)
        assert bits.tolist() == [0]

    def test_byte_identical_reruns(self, tmp_path):
        config = RunConfig(n=300, m=100, output_dir=str(tmp_path / "a"))
        cmd_simulate(config)
        cmd_simulate(RunConfig(n=300, m=100, output_dir=str(tmp_path / "b")))
        assert (tmp_path / "a" / "bits.txt").read_bytes() == \
            (tmp_path / "b" / "bits.txt").read_bytes()

    def test_cells_csv_schema(self, tmp_path):
        config = tiny_config(tmp_path, n=8, m=4)
        cmd_simulate(config)
        lines = (tmp_path / "cells.csv").read_text().splitlines()
        assert lines[0] == "index,lower,upper"
        assert len(lines) == 9
        first = lines[1].split(",")
        assert first[0] == "1" and first[1:] in ([" -1.0", "0.0"],
                                                 ["-1.0", "0.0"],
                                                 ["0.0", "1.0"])


class TestEstimatePolish:
    def test_estimate_writes_all_artifacts(self, tmp_path):
        config = tiny_config(tmp_path)
        bits = cmd_simulate(config)
        est = cmd_estimate(config, bits)
        for name in ("grid_level1.csv", "grid_level2.csv", "strengths.csv",
                     "candidate.csv", "estimate.txt"):
            assert (tmp_path / name).exists(), name
        assert est.kappa <= config.n
        assert len(est.ytilde) == est.kappa + 1
        ybar, ytilde, kappa = load_candidate(tmp_path)
        assert kappa == est.kappa
        assert np.array_equal(ybar, est.ybar)
        assert np.array_equal(ytilde, est.ytilde)

    def test_m_equal_n_permitted(self, tmp_path):
        config = tiny_config(tmp_path, n=80, m=80, levels=1,
                             total_sweeps=600, burn_in=100)
        bits = cmd_simulate(config)
        est = cmd_estimate(config, bits)
        assert est.zoom.theta_star is not None

    def test_all_zero_bits_total(self, tmp_path):
        # Adversarial input: constant bits still produce finite CES tables.
        config = tiny_config(tmp_path, n=60, m=60, levels=1,
                             total_sweeps=400, burn_in=50, anchor_threshold=1)
        bits = np.zeros(60, dtype=np.uint8)
        try:
            est = cmd_estimate(config, bits)
            tables = est.zoom.level_tables[0]
            assert all(np.isfinite(ces) for _, ces, _ in tables)
        except Exception as exc:
            # anchor-not-found is an acceptable, named outcome
            from symest.errors import AnchorNotFoundError
            assert isinstance(exc, AnchorNotFoundError)

    def test_polish_consumes_estimate(self, tmp_path):
        config = tiny_config(tmp_path)
        bits = cmd_simulate(config)
        est = cmd_estimate(config, bits)
        result = cmd_polish(config, est, bits)
        trace = (tmp_path / "polish_trace.csv").read_text().splitlines()
        assert trace[0] == "sweep,theta_mean,y0_mean"
        assert (tmp_path / "polish.txt").exists()
        assert est.zoom.truncation.lower < result.theta_hat \
            < est.zoom.truncation.upper


class TestZoomRestart:
    def test_edge_error_triggers_shifted_restart(self, monkeypatch):
        import symest.pipeline as pl
        from symest.errors import GridEdgeError
        from symest.symbolic import cells_from_bits
        calls = []
        real = pl.run_zooming

        def flaky(grid, levels, data, config, rng, workers=1):
            calls.append(grid.start)
            if len(calls) == 1:
                raise GridEdgeError(0, grid.points)
            return real(grid, levels, data, config, rng, workers=workers)

        monkeypatch.setattr(pl, "run_zooming", flaky)
        config = tiny_config("unused", n=60, m=50, levels=1,
                             total_sweeps=400, burn_in=50)
        data = cells_from_bits(np.array([0, 1] * 25, dtype=np.uint8))
        from symest.samplers import RngStream
        result = pl._zoom_with_restarts(config, data, RngStream(1))
        assert len(calls) == 2
        assert calls[1] == pytest.approx(calls[0] - config.grid_step / 2)
        assert result.theta_star is not None

    def test_persistent_edge_error_propagates(self, monkeypatch):
        import symest.pipeline as pl
        from symest.errors import GridEdgeError

        def always_edge(grid, levels, data, config, rng, workers=1):
            raise GridEdgeError(0, grid.points)

        monkeypatch.setattr(pl, "run_zooming", always_edge)
        config = tiny_config("unused", n=60, m=50)
        from symest.samplers import RngStream
        with pytest.raises(GridEdgeError):
            pl._zoom_with_restarts(config, None, RngStream(1))


class TestFullRun:
    def test_full_is_deterministic_byte_for_byte(self, tmp_path):
        config_a = tiny_config(tmp_path / "a")
        config_b = tiny_config(tmp_path / "b")
        cmd_full(config_a)
        cmd_full(config_b)
        names = ["bits.txt", "cells.csv", "grid_level1.csv", "grid_level2.csv",
                 "strengths.csv", "candidate.csv", "polish_trace.csv",
                 "polish.txt", "estimate.txt"]
        match, mismatch, errors = filecmp.cmpfiles(
            tmp_path / "a", tmp_path / "b", names, shallow=False)
        assert mismatch == [] and errors == []
        # config.txt differs only in the output directory itself
        import dataclasses
        a_cfg = load_config_file(tmp_path / "a" / "config.txt")
        b_cfg = load_config_file(tmp_path / "b" / "config.txt")
        assert dataclasses.replace(a_cfg, output_dir="") == \
            dataclasses.replace(b_cfg, output_dir="")

    def test_report_lists_artifacts(self, tmp_path):
        config = tiny_config(tmp_path)
        report = cmd_full(config)
        text = (tmp_path / "report.txt").read_text()
        assert "theta_star" in text
        assert "polish" in text
        assert report.kappa >= 0
        regenerated = cmd_report(tmp_path)
        assert "theta_star" in regenerated


class TestCli:
    def test_version_flag(self, capsys):
        assert cli_main(["--version"]) == 0
        out = capsys.readouterr().out
        assert "symest" in out and ("compiled" in out or "python" in out)

    def test_no_command_prints_help(self, capsys):
        assert cli_main([]) == 2

    def test_simulate_then_report(self, tmp_path, capsys):
        cfg_path = tmp_path / "run.cfg"
        cfg_path.write_text(serialize_config(
            tiny_config(tmp_path / "out", n=40, m=20)))
        assert cli_main(["simulate", "--config", str(cfg_path)]) == 0
        assert (tmp_path / "out" / "bits.txt").exists()

    def test_full_with_overrides(self, tmp_path, capsys):
        cfg_path = tmp_path / "run.cfg"
        cfg_path.write_text(serialize_config(tiny_config(
            tmp_path / "ignored", n=60, m=40, levels=1, total_sweeps=500,
            burn_in=80, polish_sweeps=400, polish_sites=10,
            anchor_threshold=3)))
        out_dir = tmp_path / "cli_out"
        code = cli_main(["full", "--config", str(cfg_path),
                         "--seed", "77", "--out", str(out_dir)])
        assert code == 0
        assert (out_dir / "report.txt").exists()
        saved = load_config_file(out_dir / "config.txt")
        assert saved.seed == 77

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "symest.cli",
                               "--version"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "symest" in proc.stdout
