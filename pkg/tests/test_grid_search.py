import numpy as np
import pytest

from symest.dynamics import simulate_symbolic
from symest.errors import GridEdgeError
from symest.grid_search import GridSpec, evaluate_grid, run_zooming, zoom
from symest.samplers import RngStream
from symest.strength_mcmc import GibbsConfig
from symest.symbolic import cells_from_bits

#: The three reference grids: start -1.5 step -0.045, then neighbor spans.
LEVEL1 = GridSpec(-1.5, -0.045, 12)


def small_config():
    return GibbsConfig(sigma=1e-3, burn_in=300, total_sweeps=2500)


class TestGridSpec:
    def test_values(self):
        assert LEVEL1.values()[0] == -1.5
        assert LEVEL1.point(5) == pytest.approx(-1.725)
        assert LEVEL1.point(11) == pytest.approx(-1.995)

    def test_all_points_inside_parameter_space(self):
        with pytest.raises(ValueError):
            GridSpec(-1.5, -0.05, 12)  # last point -2.05
        with pytest.raises(ValueError):
            GridSpec(-0.1, 0.05, 3)  # ascends through 0

    def test_minimum_points(self):
        with pytest.raises(ValueError):
            GridSpec(-1.5, -0.01, 2)


class TestZoom:
    def test_level1_bracket_matches_reference(self):
        nxt = zoom(LEVEL1, 5)  # maximizer -1.725
        assert nxt.start == pytest.approx(-1.68)
        assert nxt.step == pytest.approx(-0.09 / 11)
        assert nxt.points == 12
        assert nxt.point(11) == pytest.approx(-1.77)
        # 5-decimal print of the level-2 step matches the reference 0.0082
        assert round(abs(nxt.step), 4) == 0.0082

    def test_level2_argmax_and_bracket_match_reference(self):
        level2 = zoom(LEVEL1, 5)
        # The level-2 point nearest the truth is s=4; reference prints
        # -1.71273 with bracket (-1.72091, -1.70455).
        assert round(level2.point(4), 5) == -1.71273
        level3 = zoom(level2, 4)
        assert round(level3.start, 5) == -1.70455
        assert round(level3.point(11), 5) == -1.72091

    def test_symmetric_center_preserved(self):
        grid = GridSpec(-1.0, -0.1, 5)
        nxt = zoom(grid, 2)
        mid = nxt.point((nxt.points - 1) // 2)
        assert nxt.start == pytest.approx(grid.point(1))
        assert nxt.point(nxt.points - 1) == pytest.approx(grid.point(3))

    def test_edge_raises(self):
        with pytest.raises(GridEdgeError):
            zoom(LEVEL1, 0)
        with pytest.raises(GridEdgeError):
            zoom(LEVEL1, 11)

    def test_each_zoom_shrinks_step(self):
        grid = LEVEL1
        for _ in range(4):
            nxt = zoom(grid, 5)
            assert abs(nxt.step) < abs(grid.step)
            grid = nxt


class TestEvaluateGrid:
    def test_totality_far_from_truth(self):
        data = cells_from_bits(simulate_symbolic(-1.71, 0.8, 60))
        grid = GridSpec(-0.9, -0.1, 3)
        table = evaluate_grid(grid, data, small_config(), RngStream(1))
        assert len(table) == 3
        assert all(r.best_ces >= 0 for r in table)
        assert all(np.isfinite(r.candidate).all() for r in table)

    def test_worker_count_does_not_change_results(self):
        data = cells_from_bits(simulate_symbolic(-1.71, 0.8, 48))
        grid = GridSpec(-1.8, 0.03, 4)
        cfg = GibbsConfig(sigma=1e-3, burn_in=100, total_sweeps=600)
        serial = evaluate_grid(grid, data, cfg, RngStream(2), workers=1)
        pooled = evaluate_grid(grid, data, cfg, RngStream(2), workers=2)
        for a, b in zip(serial, pooled):
            assert a.theta == b.theta
            assert a.best_ces == b.best_ces
            assert np.array_equal(a.candidate, b.candidate)

    def test_streams_follow_documented_rule(self):
        from symest.strength_mcmc import run_strength_chain
        data = cells_from_bits(simulate_symbolic(-1.71, 0.8, 30))
        cfg = GibbsConfig(sigma=1e-3, burn_in=50, total_sweeps=300)
        grid = GridSpec(-1.75, 0.02, 3)
        table = evaluate_grid(grid, data, cfg, RngStream(7), level=2)
        direct = run_strength_chain(grid.point(1), data, cfg,
                                    RngStream(7, 2001))
        assert table[1].best_ces == direct.best_ces
        assert np.array_equal(table[1].candidate, direct.candidate)


class TestRunZooming:
    def test_one_level_returns_neighbor_truncation(self):
        data = cells_from_bits(simulate_symbolic(-1.71, 0.8, 80))
        grid = GridSpec(-1.77, 0.03, 4)  # points: -1.77 -1.74 -1.71 -1.68
        cfg = small_config()
        result = run_zooming(grid, 1, data, cfg, RngStream(3))
        assert result.theta_star == pytest.approx(-1.71)
        assert result.truncation.lower == pytest.approx(-1.74)
        assert result.truncation.upper == pytest.approx(-1.68)

    def test_reproducible_tables(self):
        data = cells_from_bits(simulate_symbolic(-1.71, 0.8, 60))
        grid = GridSpec(-1.76, 0.025, 5)
        cfg = GibbsConfig(sigma=1e-3, burn_in=200, total_sweeps=1200)
        a = run_zooming(grid, 2, data, cfg, RngStream(4))
        b = run_zooming(grid, 2, data, cfg, RngStream(4))
        assert a.level_tables == b.level_tables
        assert a.theta_star == b.theta_star

    def test_levels_validation(self):
        data = cells_from_bits(simulate_symbolic(-1.71, 0.8, 30))
        with pytest.raises(ValueError):
            run_zooming(LEVEL1, 0, data, small_config(), RngStream(5))
