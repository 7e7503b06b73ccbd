"""Discrete-chain analysis: structure, stationary vectors, passage times."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkchain import (
    ChainAnalysis,
    Distribution,
    StochasticMatrix,
    UnreachableStateError,
    accessible,
    analyze,
    array_from_csv,
    array_to_csv,
    commute_time,
    degree_sum,
    distribution_from_csv,
    distribution_to_csv,
    evolve,
    hitting_time,
    matrix_from_csv,
    matrix_to_csv,
    mixing_rate,
    mixing_time,
    n_step,
    random_walk_matrix,
    sample_path,
    stationary_distribution,
    total_variation,
)
from conftest import connected_graphs, stochastic_matrices


def _sm(rows) -> StochasticMatrix:
    return StochasticMatrix(np.array(rows, dtype=float))


# frequently reused chains
FLIP = _sm([[0.0, 1.0], [1.0, 0.0]])  # period-2 swap
LAZY_FLIP = _sm([[0.75, 0.25], [0.25, 0.75]])
K3 = _sm((np.ones((3, 3)) - np.eye(3)) / 2.0)
REDUCIBLE = _sm(
    [
        [0.5, 0.5, 0.0, 0.0],
        [0.5, 0.5, 0.0, 0.0],
        [0.25, 0.25, 0.25, 0.25],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


def path_graph_matrix(n: int) -> StochasticMatrix:
    P = np.zeros((n, n))
    for i in range(n):
        nbrs = [j for j in (i - 1, i + 1) if 0 <= j < n]
        for j in nbrs:
            P[i, j] = 1.0 / len(nbrs)
    return StochasticMatrix(P)


class TestValidation:
    def test_rejects_negative_entry(self):
        with pytest.raises(ValueError, match="negative"):
            _sm([[1.1, -0.1], [0.5, 0.5]])

    def test_rejects_bad_row_sum(self):
        with pytest.raises(ValueError, match="row 1"):
            _sm([[0.5, 0.5], [0.5, 0.4]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            StochasticMatrix(np.array([[0.5, 0.5]]))

    def test_relaxed_tolerance_per_instance(self):
        entries = np.array([[0.5, 0.4999], [0.5, 0.5]])
        with pytest.raises(ValueError):
            StochasticMatrix(entries)
        loose = StochasticMatrix(entries, row_sum_tol=1e-3)
        assert loose.row_sum_tol == 1e-3

    def test_entries_are_write_protected(self):
        P = _sm([[0.5, 0.5], [0.5, 0.5]])
        with pytest.raises(ValueError):
            P.entries[0, 0] = 1.0

    def test_distribution_must_sum_to_one(self):
        with pytest.raises(ValueError):
            Distribution(np.array([0.5, 0.4]))
        with pytest.raises(ValueError):
            Distribution(np.array([1.5, -0.5]))


class TestEvolution:
    def test_zero_steps_is_identity(self):
        assert np.array_equal(n_step(K3, 0).entries, np.eye(3))

    def test_one_step_is_the_matrix(self):
        assert np.array_equal(n_step(K3, 1).entries, K3.entries)

    def test_rejects_negative_step_count(self):
        with pytest.raises(ValueError):
            n_step(K3, -1)

    @given(stochastic_matrices(), st.integers(0, 4), st.integers(0, 4))
    def test_chapman_kolmogorov(self, P, m, n):
        lhs = n_step(P, m + n).entries
        rhs = n_step(P, m).entries @ n_step(P, n).entries
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_evolve_matches_matrix_power(self):
        d0 = Distribution(np.array([1.0, 0.0, 0.0]))
        d3 = evolve(d0, K3, 3)
        assert np.allclose(d3.probs, (np.eye(3)[0] @ np.linalg.matrix_power(K3.entries, 3)))

    def test_evolve_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evolve(Distribution(np.array([1.0, 0.0])), K3, 1)


class TestAccessibility:
    def test_reflexive_even_without_self_loop(self):
        assert accessible(FLIP, 0, 0)

    def test_one_way_street(self):
        P = _sm([[0.5, 0.5], [0.0, 1.0]])
        assert accessible(P, 0, 1)
        assert not accessible(P, 1, 0)

    def test_state_bounds_checked(self):
        with pytest.raises(ValueError):
            accessible(FLIP, 0, 2)

    @given(stochastic_matrices(max_n=5))
    def test_transitive(self, P):
        n = P.n
        for i in range(n):
            for j in range(n):
                if not accessible(P, i, j):
                    continue
                for k in range(n):
                    if accessible(P, j, k):
                        assert accessible(P, i, k)


class TestStructure:
    def test_irreducible_chain_is_one_closed_class(self):
        a = analyze(K3)
        assert a.classes == ((0, 1, 2),)
        assert a.closed == (True,)
        assert a.irreducible

    def test_reducible_chain_classes_and_closure(self):
        a = analyze(REDUCIBLE)
        assert a.classes == ((0, 1), (2,), (3,))
        assert a.closed == (True, False, True)
        assert not a.irreducible
        assert a.stationary is None and a.mixing_rate is None and a.mixing_time is None

    def test_identity_matrix_is_all_absorbing(self):
        a = analyze(_sm(np.eye(3)))
        assert a.classes == ((0,), (1,), (2,))
        assert a.closed == (True, True, True)
        assert a.periods == (1, 1, 1)

    def test_periods(self):
        assert analyze(FLIP).periods == (2,)
        assert analyze(K3).periods == (1,)
        # walk on a 4-cycle alternates parity classes
        cycle4 = _sm(
            [
                [0.0, 0.5, 0.0, 0.5],
                [0.5, 0.0, 0.5, 0.0],
                [0.0, 0.5, 0.0, 0.5],
                [0.5, 0.0, 0.5, 0.0],
            ]
        )
        assert analyze(cycle4).periods == (2,)

    def test_transient_singleton_without_return_has_period_zero(self):
        P = _sm([[0.0, 1.0], [0.0, 1.0]])
        a = analyze(P)
        assert a.classes == ((0,), (1,))
        assert a.periods == (0, 1)

    def test_transient_state_with_self_loop_has_period_one(self):
        a = analyze(REDUCIBLE)
        assert a.periods[1] == 1  # state 2 can return to itself immediately

    @given(connected_graphs())
    def test_graph_walks_are_irreducible(self, g):
        a = analyze(random_walk_matrix(g))
        assert a.irreducible
        assert a.periods[0] in (1, 2)  # bipartite or not


class TestStationary:
    def test_two_state_closed_form(self):
        P = _sm([[0.7, 0.3], [0.1, 0.9]])
        pi = stationary_distribution(P).probs
        assert np.allclose(pi, [0.25, 0.75], atol=1e-14)

    def test_reducible_raises(self):
        with pytest.raises(ValueError, match="reducible"):
            stationary_distribution(REDUCIBLE)

    @given(connected_graphs())
    def test_walk_stationary_is_degree_over_total(self, g):
        pi = stationary_distribution(random_walk_matrix(g)).probs
        expected = g.degrees() / degree_sum(g)
        assert np.allclose(pi, expected, atol=1e-12)

    def test_matches_long_run_marginal_for_positive_chain(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            M = rng.uniform(0.05, 1.0, size=(5, 5))
            P = StochasticMatrix(M / M.sum(axis=1, keepdims=True))
            pi = stationary_distribution(P).probs
            far = evolve(Distribution(np.eye(5)[0]), P, 300).probs
            assert np.allclose(pi, far, atol=1e-12)

    def test_invariance_under_one_step(self):
        pi = stationary_distribution(LAZY_FLIP)
        moved = evolve(pi, LAZY_FLIP, 1)
        assert np.allclose(moved.probs, pi.probs, atol=1e-14)


class TestMixing:
    def test_total_variation_basics(self):
        assert total_variation(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0
        assert total_variation(np.array([0.5, 0.5]), np.array([0.5, 0.5])) == 0.0
        with pytest.raises(ValueError):
            total_variation(np.array([1.0]), np.array([0.5, 0.5]))

    def test_lazy_flip_rate_and_time(self):
        assert mixing_rate(LAZY_FLIP) == pytest.approx(0.5, abs=1e-12)
        # rows of P are already within 1/4 of (1/2, 1/2)
        assert mixing_time(LAZY_FLIP) == 1

    def test_triangle_walk_mixes_in_two_steps(self):
        # row TV after t steps is (2/3) * 2**-t: above 1/4 at t=1, below at t=2
        assert mixing_rate(K3) == pytest.approx(0.5, abs=1e-12)
        assert mixing_time(K3) == 2

    def test_periodic_chain_never_mixes(self):
        assert mixing_rate(FLIP) == pytest.approx(1.0, abs=1e-12)
        assert mixing_time(FLIP) is None

    def test_nearly_frozen_chain_exceeds_cap(self):
        P = _sm([[1 - 1e-7, 1e-7], [1e-7, 1 - 1e-7]])
        assert mixing_time(P) is None

    def test_single_state_rate_is_zero(self):
        assert mixing_rate(_sm([[1.0]])) == 0.0


class TestPassageTimes:
    def test_path_endpoints(self):
        P = path_graph_matrix(4)
        assert hitting_time(P, 0, 3) == pytest.approx(9.0, abs=1e-9)
        assert hitting_time(P, 0, 0) == 0.0

    def test_classic_small_graphs(self):
        # 3-path between endpoints
        P3 = path_graph_matrix(3)
        assert hitting_time(P3, 0, 2) == pytest.approx(4.0, abs=1e-9)
        assert commute_time(P3, 0, 2) == pytest.approx(8.0, abs=1e-9)
        # leaf to leaf across a 3-spoke hub
        star = _sm(
            [
                [0.0, 1 / 3, 1 / 3, 1 / 3],
                [1.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
            ]
        )
        assert hitting_time(star, 1, 2) == pytest.approx(6.0, abs=1e-9)
        assert commute_time(star, 1, 2) == pytest.approx(12.0, abs=1e-9)
        # complete graph on 4 states: geometric with success chance 1/3
        K4 = _sm((np.ones((4, 4)) - np.eye(4)) / 3.0)
        assert hitting_time(K4, 0, 1) == pytest.approx(3.0, abs=1e-9)
        # opposite-ish pair on a 5-cycle, distance 2: d * (n - d)
        cyc = np.zeros((5, 5))
        for i in range(5):
            cyc[i, (i + 1) % 5] = 0.5
            cyc[i, (i - 1) % 5] = 0.5
        C5 = StochasticMatrix(cyc)
        assert hitting_time(C5, 0, 2) == pytest.approx(6.0, abs=1e-9)
        assert commute_time(C5, 0, 2) == pytest.approx(12.0, abs=1e-9)

    def test_geometric_absorption(self):
        P = _sm([[1.0, 0.0], [0.5, 0.5]])
        assert hitting_time(P, 1, 0) == pytest.approx(2.0, abs=1e-12)

    def test_unreachable_target_raises_with_stranded_states(self):
        P = _sm([[1.0, 0.0], [0.5, 0.5]])
        with pytest.raises(UnreachableStateError) as exc:
            hitting_time(P, 0, 1)
        assert exc.value.target == 1
        assert exc.value.stranded == (0,)

    def test_absorbing_trap_on_the_way(self):
        # from 0 the walk may fall into absorbing 2 and never reach 1
        P = _sm([[0.0, 0.5, 0.5], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        with pytest.raises(UnreachableStateError) as exc:
            hitting_time(P, 0, 1)
        assert 2 in exc.value.stranded

    @given(connected_graphs(max_n=7))
    @settings(max_examples=40)
    def test_hitting_time_dominates_graph_distance(self, g):
        P = random_walk_matrix(g)
        # BFS hop counts are a lower bound on expected steps
        dist = np.full(g.n, -1)
        dist[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for u in frontier:
                for v in g.neighbors(u):
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        for v in range(1, g.n):
            assert hitting_time(P, 0, v) >= dist[v] - 1e-9


class TestSamplePath:
    def test_deterministic_cycle(self):
        P = _sm([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        path = sample_path(P, 0, 6, seed=1)
        assert path.tolist() == [0, 1, 2, 0, 1, 2, 0]

    def test_seed_reproducibility(self):
        a = sample_path(K3, 0, 50, seed=123)
        b = sample_path(K3, 0, 50, seed=123)
        c = sample_path(K3, 0, 50, seed=124)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_length_and_start(self):
        path = sample_path(K3, 2, 10, seed=0)
        assert path.shape == (11,)
        assert path[0] == 2

    @given(stochastic_matrices(max_n=5), st.integers(0, 2**16))
    @settings(max_examples=40)
    def test_only_positive_transitions_used(self, P, seed):
        path = sample_path(P, 0, 30, seed=seed)
        for a, b in zip(path[:-1], path[1:]):
            assert P.entries[a, b] > 0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sample_path(K3, 5, 3, seed=0)
        with pytest.raises(ValueError):
            sample_path(K3, 0, -1, seed=0)


class TestCsv:
    @given(stochastic_matrices())
    def test_matrix_roundtrip_is_bit_exact(self, P):
        back = matrix_from_csv(matrix_to_csv(P))
        assert np.array_equal(back.entries, P.entries)

    def test_distribution_roundtrip(self):
        d = Distribution(np.array([0.125, 0.375, 0.5]))
        back = distribution_from_csv(distribution_to_csv(d))
        assert np.array_equal(back.probs, d.probs)

    def test_array_roundtrip_preserves_tiny_values(self):
        arr = np.array([[1e-17, 1.0 - 1e-16], [0.3333333333333333, 2.0 / 3.0]])
        assert np.array_equal(array_from_csv(array_to_csv(arr)), arr)

    def test_blank_lines_ignored(self):
        arr = array_from_csv("1.0,0.0\n\n0.5,0.5\n")
        assert arr.shape == (2, 2)
