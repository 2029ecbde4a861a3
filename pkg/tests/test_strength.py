import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symest.dynamics import evaluate, iterate, simulate_symbolic
from symest.errors import AnchorNotFoundError
from symest.strength import (StrengthProfile, backward_refine,
                             cumulative_strength, point_strength,
                             select_anchor)
from symest.symbolic import cells_from_bits


def oracle_point_strength(theta, y, index, bits):
    """Literal definition scan: longest k with every iterate in its cell,
    recomputing each composition from scratch."""
    n = len(bits)

    def compose(j):
        z = y
        for _ in range(j):
            z = 1.0 + theta * (z * z)
        return z

    def hit(j):
        z = compose(j)
        if bits[index + j - 1]:
            return 0.0 <= z < 1.0
        return -1.0 < z < 0.0

    best = 0
    for k in range(1, n - index + 1):
        if all(hit(j) for j in range(1, k + 1)):
            best = k
    return best


class TestPointStrength:
    def test_true_orbit_has_full_agreement(self, paper_bits_1000,
                                           true_orbit_1000):
        data = cells_from_bits(paper_bits_1000[:40])
        for i in (0, 7, 25, 39, 40):
            got = point_strength(-1.71, true_orbit_1000[i], i, data)
            assert got == 40 - i

    def test_immediate_mismatch_is_zero(self):
        data = cells_from_bits([0, 1])
        # g(theta, 0) = 1, which is never inside (-1, 0)
        assert point_strength(-1.71, 0.0, 0, data) == 0

    def test_index_n_is_zero(self):
        data = cells_from_bits([1, 1, 1])
        assert point_strength(-1.71, 0.5, 3, data) == 0

    def test_index_n_minus_one_is_indicator(self):
        data = cells_from_bits([1, 0])
        y = 0.3
        expected = 1 if -1.0 < evaluate(-1.71, y) < 0.0 else 0
        assert point_strength(-1.71, y, 1, data) == expected


class TestCumulativeStrength:
    def test_true_orbit_gives_triangular_ces(self):
        n = 24
        bits = simulate_symbolic(-1.71, 0.8, n)
        orbit = iterate(-1.71, 0.8, n).full()
        profile = cumulative_strength(-1.71, orbit, cells_from_bits(bits))
        assert profile.ces == n * (n + 1) // 2
        assert profile.per_index.tolist() == list(range(n, -1, -1))

    def test_all_zero_candidate_hand_case(self):
        data = cells_from_bits([0, 1, 0, 1])
        profile = cumulative_strength(-1.71, np.zeros(5), data)
        assert profile.per_index[0] == 0  # g(-1.71, 0) = 1, D_1 = (-1, 0)

    @given(seed=st.integers(0, 10_000), n=st.integers(2, 50))
    @settings(max_examples=80, deadline=None)
    def test_matches_definition_scan(self, seed, n):
        rng = np.random.default_rng(seed)
        theta = rng.uniform(-2.0, -0.1)
        bits = rng.integers(0, 2, n)
        cand = rng.uniform(-1.0, 1.0, n + 1)
        data = cells_from_bits(bits)
        profile = cumulative_strength(theta, cand, data)
        expect = [oracle_point_strength(theta, cand[i], i, bits)
                  for i in range(n + 1)]
        assert profile.per_index.tolist() == expect
        assert profile.ces == sum(expect[:n])
        for i in range(n + 1):
            assert point_strength(theta, cand[i], i, data) == expect[i]

    def test_per_index_bounded_by_tail_length(self, paper_bits_1000):
        data = cells_from_bits(paper_bits_1000[:100])
        rng = np.random.default_rng(3)
        cand = rng.uniform(-1, 1, 101)
        profile = cumulative_strength(-1.4, cand, data)
        bound = np.arange(100, -1, -1)
        assert np.all(profile.per_index <= bound)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cumulative_strength(-1.71, np.zeros(4), cells_from_bits([0, 1]))


class TestSelectAnchor:
    def test_largest_qualifying_index(self):
        profile = StrengthProfile(np.array([30, 2, 25, 7, 0]), 64)
        assert select_anchor(profile, 20) == 2

    def test_single_qualifier(self):
        per = np.zeros(10, dtype=np.int64)
        per[7] = 9
        assert select_anchor(StrengthProfile(per, 9), 8) == 7

    def test_none_qualify(self):
        profile = StrengthProfile(np.array([3, 2, 1, 0]), 6)
        with pytest.raises(AnchorNotFoundError):
            select_anchor(profile, 20)

    def test_threshold_is_strict(self):
        profile = StrengthProfile(np.array([20, 20]), 40)
        with pytest.raises(AnchorNotFoundError):
            select_anchor(profile, 20)


class TestBackwardRefine:
    def test_kappa_zero_is_identity(self):
        cand = np.array([0.37, 0.9, -0.2])
        out = backward_refine(-1.71, cand, 0)
        assert out.tolist() == [0.37]

    def test_exactly_forward_consistent(self):
        # The refined sequence is a true orbit of the map up to rounding.
        n = 60
        bits = simulate_symbolic(-1.71, 0.8, n)
        cand = iterate(-1.71, 0.8, n).full() + 1e-4 * np.sin(np.arange(n + 1))
        out = backward_refine(-1.7099, cand, n)
        for i in range(n):
            assert abs(evaluate(-1.7099, out[i]) - out[i + 1]) \
                <= 2.0 * np.spacing(1.0)

    def test_contracts_anchor_error_toward_the_head(self, true_orbit_1000):
        # Backward iteration through the expanding map contracts errors, so
        # early refined points are far closer to the truth than the anchor.
        kappa = 40
        cand = true_orbit_1000[:kappa + 1].copy()
        cand[kappa] += 5e-4
        out = backward_refine(-1.71, cand, kappa)
        head_err = np.abs(out[:5] - true_orbit_1000[:5]).max()
        assert head_err < 5e-7

    def test_sign_follows_candidate(self):
        cand = np.array([-0.8, -0.09440000, 0.98476157])
        out = backward_refine(-1.71, cand, 2)
        assert out[1] < 0 and out[0] < 0
        assert abs(out[1] + 0.0944) < 1e-6
