"""Uniformized continuous-time chains: generator, transient law, event clock."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkchain import (
    GeneratorMatrix,
    StochasticMatrix,
    UniformizedChain,
    generator,
    poisson_pmf,
    poisson_truncation,
    sample_arrivals,
    sojourn_mean,
    stationary_distribution,
    transient,
)
from conftest import stochastic_matrices

FLIP = StochasticMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))


class TestGeneratorMatrix:
    def test_rejects_negative_off_diagonal(self):
        with pytest.raises(ValueError, match="off-diagonal"):
            GeneratorMatrix(np.array([[1.0, -1.0], [2.0, -2.0]]))

    def test_rejects_nonzero_row_sum(self):
        with pytest.raises(ValueError, match="row 0"):
            GeneratorMatrix(np.array([[-1.0, 1.5], [2.0, -2.0]]))

    def test_from_chain_has_exact_zero_row_sums(self):
        chain = UniformizedChain(FLIP, rate=3.0)
        Q = generator(chain)
        assert np.array_equal(Q.entries, np.array([[-3.0, 3.0], [3.0, -3.0]]))
        assert np.all(Q.entries.sum(axis=1) == 0.0)

    @given(stochastic_matrices(), st.floats(0.1, 20.0))
    def test_generator_equals_rate_times_p_minus_i(self, P, rate):
        Q = generator(UniformizedChain(P, rate))
        expected = rate * (P.entries - np.eye(P.n))
        # diagonals may differ by rate * (row-sum rounding), so not bit-equal
        assert np.allclose(Q.entries, expected, atol=1e-9)
        # re-summing the row in index order can leave a 1-ulp residue for
        # non-representable entries; exact zero holds only for rows like FLIP's
        assert np.abs(Q.entries.sum(axis=1)).max() <= 1e-12

    def test_rate_must_be_positive(self):
        with pytest.raises(ValueError):
            UniformizedChain(FLIP, rate=0.0)
        with pytest.raises(ValueError):
            UniformizedChain(FLIP, rate=float("nan"))


class TestPoisson:
    def test_pmf_known_values(self):
        assert poisson_pmf(1.0, 0.0, 0) == 1.0
        assert poisson_pmf(1.0, 0.0, 3) == 0.0
        assert poisson_pmf(2.0, 1.0, 0) == pytest.approx(math.exp(-2.0), rel=1e-14)
        assert poisson_pmf(2.0, 1.0, 2) == pytest.approx(2.0 * math.exp(-2.0), rel=1e-14)

    def test_pmf_survives_large_counts(self):
        # naive factorial would overflow long before n = 400
        v = poisson_pmf(1.0, 300.0, 400)
        assert 0.0 < v < 1.0

    @given(st.floats(0.1, 10.0), st.floats(0.0, 30.0))
    @settings(max_examples=50)
    def test_pmf_sums_to_one(self, rate, t):
        N = poisson_truncation(rate, t, 1e-12) if rate * t > 0 else 0
        total = sum(poisson_pmf(rate, t, n) for n in range(N + 1))
        assert total == pytest.approx(1.0, abs=1e-11)

    def test_truncation_bounds_tail(self):
        rate, t, tol = 5.0, 2.0, 1e-9
        N = poisson_truncation(rate, t, tol)
        head = sum(poisson_pmf(rate, t, n) for n in range(N + 1))
        assert head >= 1.0 - tol
        # one term fewer must not suffice (N is minimal)
        assert head - poisson_pmf(rate, t, N) < 1.0 - tol

    def test_tolerance_window_enforced(self):
        with pytest.raises(ValueError):
            poisson_truncation(1.0, 1.0, 1e-14)
        with pytest.raises(ValueError):
            poisson_truncation(1.0, 1.0, 1e-3)


class TestTransient:
    def test_time_zero_is_identity(self):
        chain = UniformizedChain(FLIP, rate=2.0)
        assert np.array_equal(transient(chain, 0.0).entries, np.eye(2))

    def test_flip_chain_closed_form(self):
        # P(t)[0][0] = (1 + exp(-2 rate t)) / 2 for the two-state swap
        rate = 2.0
        chain = UniformizedChain(FLIP, rate=rate)
        for t in (0.1, 0.5, 1.0, 3.0):
            M = transient(chain, t, tol=1e-12).entries
            p00 = (1.0 + math.exp(-2.0 * rate * t)) / 2.0
            assert M[0, 0] == pytest.approx(p00, abs=1e-10)
            assert M[0, 1] == pytest.approx(1.0 - p00, abs=1e-10)
            assert M[0, 0] == pytest.approx(M[1, 1], abs=1e-12)

    def test_rows_sum_within_stated_deficit(self):
        rng = np.random.default_rng(3)
        M = rng.uniform(0.0, 1.0, size=(4, 4))
        P = StochasticMatrix(M / M.sum(axis=1, keepdims=True))
        chain = UniformizedChain(P, rate=1.7)
        tol = 1e-9
        sums = transient(chain, 2.5, tol=tol).entries.sum(axis=1)
        assert np.all(sums <= 1.0 + 1e-12)
        assert np.all(sums >= 1.0 - tol - 1e-12)

    @given(stochastic_matrices(max_n=4), st.floats(0.2, 3.0), st.floats(0.1, 2.0), st.floats(0.1, 2.0))
    @settings(max_examples=30)
    def test_semigroup_property(self, P, rate, s, t):
        chain = UniformizedChain(P, rate)
        tol = 1e-12
        left = transient(chain, s + t, tol=tol).entries
        right = transient(chain, s, tol=tol).entries @ transient(chain, t, tol=tol).entries
        assert np.allclose(left, right, atol=1e-8)

    def test_derivative_at_zero_matches_generator(self):
        chain = UniformizedChain(FLIP, rate=1.0)
        Q = generator(chain).entries
        C = np.abs(Q @ Q).sum(axis=1).max()  # curvature bound for the linear fit
        for h in (1e-3, 1e-4):
            D = (transient(chain, h, tol=1e-12).entries - np.eye(2)) / h
            assert np.abs(D - Q).max() <= C * h

    def test_long_horizon_reaches_stationarity(self):
        # jump chain is periodic, but the continuous-time law still converges
        star = StochasticMatrix(
            np.array(
                [
                    [0.0, 1 / 3, 1 / 3, 1 / 3],
                    [1.0, 0.0, 0.0, 0.0],
                    [1.0, 0.0, 0.0, 0.0],
                    [1.0, 0.0, 0.0, 0.0],
                ]
            )
        )
        pi = stationary_distribution(star).probs
        M = transient(UniformizedChain(star, rate=1.0), 60.0, tol=1e-12).entries
        assert np.abs(M - pi[None, :]).max() < 1e-8

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            transient(UniformizedChain(FLIP, rate=1.0), -0.5)


class TestClock:
    def test_sojourn_mean_is_reciprocal_rate(self):
        assert sojourn_mean(UniformizedChain(FLIP, rate=4.0)) == 0.25

    def test_arrivals_sorted_within_horizon(self):
        times = sample_arrivals(3.0, 10.0, seed=7)
        assert np.all(np.diff(times) > 0)
        assert times[0] > 0.0
        assert times[-1] <= 10.0

    def test_arrivals_reproducible_by_seed(self):
        a = sample_arrivals(2.0, 50.0, seed=11)
        b = sample_arrivals(2.0, 50.0, seed=11)
        c = sample_arrivals(2.0, 50.0, seed=12)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_zero_horizon_gives_no_events(self):
        assert sample_arrivals(5.0, 0.0, seed=1).size == 0

    def test_count_matches_rate_road_test(self):
        # mean gap over many events concentrates near 1/rate
        times = sample_arrivals(4.0, 500.0, seed=21)
        gaps = np.diff(np.concatenate([[0.0], times]))
        assert gaps.mean() == pytest.approx(0.25, abs=0.02)
