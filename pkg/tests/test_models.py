from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbsanneal.core import exact_bounds, log_partition, log_ratio, mean_hamiltonian
from gibbsanneal.errors import InvalidParameter, NotAntiferro, TooLarge
from gibbsanneal.models import (
    Graph,
    IsingSpec,
    RandomClusterSpec,
    TwoSpinSpec,
    builtin,
    edwards_sokal_spin,
    enumerate_ising,
    enumerate_matchings,
    enumerate_rc,
    enumerate_two_spin,
    field_dynamics_step,
    fixed_point,
    glauber_matchings,
    glauber_two_spin,
    ising_marginal_bound_check,
    ising_rc_identity_check,
    lambda_c,
    oracle_from_glauber,
    rc_from_ising,
    rc_params,
    sample_rc,
    tilt,
    tree_recursion,
    two_spin_bounds,
    uniqueness_check,
)
from gibbsanneal.models.ising import ising_configuration_probabilities, ising_marginals, rc_subset_log_weights
from gibbsanneal.models.rc_sampler import sample_rc_brute
from gibbsanneal.models.uniqueness import all_lambda_unique, derivative_at_fixed_point
from gibbsanneal.pipeline import estimate_nonadaptive
from gibbsanneal.oracle import ExactOracle

from brute import brute_ising_z, brute_matching_counts, brute_rc_z, brute_two_spin_z

K2 = Graph.complete(2)
P3 = Graph.path(3)
P4 = Graph.path(4)
TRIANGLE = Graph.complete(3)


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph(n, tuple(edges))


@st.composite
def two_spin_specs(draw):
    g2 = draw(st.floats(0.1, 3.0))
    g1 = draw(st.just(0.0) | st.floats(1e-3, 1.0)) * g2
    return TwoSpinSpec(g1, g2, draw(st.floats(0.05, 5.0)))


@st.composite
def ising_cases(draw, max_n=6):
    g = draw(small_graphs(max_n))
    delta = draw(st.floats(0.05, 0.9))
    gamma = [1 + delta + draw(st.floats(0, 3)) for _ in range(g.m)]
    lam = [draw(st.floats(0, 1)) * (1 - delta) for _ in range(g.n)]
    return g, IsingSpec(np.array(gamma), np.array(lam), delta)


# --- graph --------------------------------------------------------------------


class TestGraph:
    def test_rejects_loops_and_duplicates(self):
        with pytest.raises(InvalidParameter):
            Graph(2, ((0, 0),))
        with pytest.raises(InvalidParameter):
            Graph(2, ((0, 1), (1, 0)))

    def test_csr(self):
        indptr, nbr, eid = P3.csr
        assert list(indptr) == [0, 1, 3, 4]
        assert sorted(nbr[1:3]) == [0, 2]
        assert nbr.dtype == np.int64

    def test_line_graph(self):
        assert Graph.path(4).line_graph().edges == ((0, 1), (1, 2))


# --- 2-spin ---------------------------------------------------------------------


class TestTwoSpin:
    def test_hardcore_k2(self):
        m = enumerate_two_spin(K2, TwoSpinSpec.hardcore(1.0))
        assert list(m.x) == [0.0, 1.0]
        assert np.allclose(np.exp(m.log_c), [1.0, 2.0])
        lam = 0.7
        assert math.exp(log_partition(m, math.log(lam))) == pytest.approx(1 + 2 * lam)

    def test_hardcore_p4(self):
        m = enumerate_two_spin(P4, TwoSpinSpec.hardcore(1.0))
        assert np.allclose(np.exp(m.log_c), [1, 4, 3])
        assert math.exp(log_partition(m, 0.0)) == pytest.approx(8.0)

    @settings(max_examples=40, deadline=None)
    @given(small_graphs(), two_spin_specs())
    def test_histogram_matches_direct_sum(self, g, spec):
        m = enumerate_two_spin(g, spec)
        z = log_partition(m, math.log(spec.lam))
        assert z == pytest.approx(math.log(brute_two_spin_z(g, spec)), rel=1e-10, abs=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(small_graphs(), two_spin_specs())
    def test_flipped_reproduces_z(self, g, spec):
        if spec.gamma1 == 0:
            return
        m = enumerate_two_spin(g, spec, flipped=True)
        z = log_partition(m, -math.log(spec.lam)) + g.n * math.log(spec.lam)
        assert z == pytest.approx(math.log(brute_two_spin_z(g, spec)), rel=1e-10, abs=1e-10)

    def test_bounds_formula(self):
        b = two_spin_bounds(Graph.path(10), TwoSpinSpec.hardcore(1.0), 1.0, "first")
        assert b.q == pytest.approx(10 * math.log(2))
        assert b.h == 10
        assert b.beta_min == -math.inf and b.beta_max == 0.0

    def test_bounds_small_lambda(self):
        b = two_spin_bounds(P4, TwoSpinSpec.hardcore(1.0), 1e-12, "first")
        assert b.q < 1e-10

    def test_second_interval_needs_gamma1(self):
        with pytest.raises(InvalidParameter):
            two_spin_bounds(P4, TwoSpinSpec.hardcore(1.0), 2.0, "second")

    @settings(max_examples=40, deadline=None)
    @given(small_graphs(), two_spin_specs(), st.sampled_from(["first", "second"]))
    def test_bounds_dominate_exact(self, g, spec, interval):
        if interval == "second" and spec.gamma1 == 0:
            return
        b = two_spin_bounds(g, spec, interval=interval)
        m = enumerate_two_spin(g, spec, flipped=interval == "second")
        q, h = exact_bounds(m, b.beta_min, b.beta_max)
        assert q <= b.q + 1e-9
        assert h <= b.h + 1e-9

    def test_cap(self):
        with pytest.raises(TooLarge):
            enumerate_two_spin(Graph.empty(21), TwoSpinSpec.hardcore(1.0))

    def test_spec_validation(self):
        with pytest.raises(InvalidParameter):
            TwoSpinSpec(2.0, 1.0, 1.0)
        with pytest.raises(InvalidParameter):
            TwoSpinSpec(0.0, 1.0, 0.0)


# --- uniqueness ---------------------------------------------------------------


class TestUniqueness:
    def test_hardcore_threshold(self):
        assert lambda_c(0.0, 1.0, 3).lower == 4.0

    def test_hardcore_unique_at_one(self):
        d = derivative_at_fixed_point(2, 0.0, 1.0, 1.0)
        assert d < 1
        assert uniqueness_check(0.0, 1.0, 1.0, 3, 1 - d)
        assert not uniqueness_check(0.0, 1.0, 1.0, 3, 1 - d + 1e-6)

    def test_small_lambda(self):
        assert derivative_at_fixed_point(5, 0.0, 1.0, 1e-9) < 1e-7
        assert uniqueness_check(0.0, 1.0, 1e-9, 6, 0.5)

    @settings(max_examples=80)
    @given(st.integers(1, 12), st.floats(0.01, 2.0), st.floats(0, 0.99), st.floats(1e-3, 1e3))
    def test_fixed_point_residual(self, d, g2, frac, lam):
        g1 = frac * min(g2, 1 / g2) * 0.99
        x = fixed_point(d, g1, g2, lam)
        assert abs(tree_recursion(d, x, g1, g2, lam)[0] - x) <= 1e-10 * max(1.0, x)

    def test_derivative_formula(self):
        d, g1, g2, lam, x = 3, 0.2, 0.7, 1.3, 0.9
        h = 1e-6
        fd = (tree_recursion(d, x + h, g1, g2, lam)[0] - tree_recursion(d, x - h, g1, g2, lam)[0]) / (2 * h)
        assert tree_recursion(d, x, g1, g2, lam)[1] == pytest.approx(fd, rel=1e-7)

    def test_not_antiferro(self):
        with pytest.raises(NotAntiferro):
            uniqueness_check(1.0, 2.0, 1.0, 3, 0.1)
        with pytest.raises(NotAntiferro):
            lambda_c(1.0, 1.0, 3)

    @pytest.mark.parametrize("g1,g2,delta_max", [(0.0, 1.0, 3), (0.0, 0.8, 5), (0.2, 0.5, 6), (0.1, 0.1, 10), (0.05, 0.9, 4)])
    def test_threshold_consistency(self, g1, g2, delta_max):
        t = lambda_c(g1, g2, delta_max)
        assert math.isfinite(t.lower)
        assert uniqueness_check(g1, g2, t.lower * (1 - 1e-3), delta_max, 1e-6)
        assert not uniqueness_check(g1, g2, t.lower * (1 + 1e-3), delta_max, 1e-6)
        if t.upper is not None:
            assert not uniqueness_check(g1, g2, t.upper * (1 - 1e-3), delta_max, 1e-6)
            assert uniqueness_check(g1, g2, t.upper * (1 + 1e-3), delta_max, 1e-6)

    @pytest.mark.parametrize("g1,g2,delta_max", [(0.5, 0.9, 4), (0.8, 0.9, 3), (0.3, 0.3, 2)])
    def test_all_lambda_unique(self, g1, g2, delta_max):
        assert math.sqrt(g1 * g2) > (delta_max - 2) / delta_max
        assert all_lambda_unique(g1, g2, delta_max)
        for lam in np.logspace(-4, 4, 25):
            assert uniqueness_check(g1, g2, lam, delta_max, 1e-9)

    def test_regular_threshold(self):
        delta_max = 4
        t = lambda_c(0.0, 1.0, delta_max, regular=True)
        assert t.lower == pytest.approx(3**3 / 2**4)

    @settings(max_examples=40)
    @given(st.floats(0.0, 0.95), st.floats(0.05, 1.0), st.floats(1e-2, 50), st.integers(2, 8))
    def test_monotone_in_d(self, frac, g2, lam, d):
        g1 = frac * g2
        assert derivative_at_fixed_point(d + 1, g1, g2, lam) >= derivative_at_fixed_point(d, g1, g2, lam) - 1e-12


# --- matchings ------------------------------------------------------------------


class TestMatchings:
    def test_k2(self):
        assert np.allclose(np.exp(enumerate_matchings(K2).log_c), [1, 1])

    def test_triangle(self):
        m = enumerate_matchings(TRIANGLE)
        assert np.allclose(np.exp(m.log_c), [1, 3])
        assert math.exp(log_partition(m, 0.0)) == pytest.approx(4.0)

    def test_p4(self):
        assert np.allclose(np.exp(enumerate_matchings(P4).log_c), [1, 3, 1])

    @settings(max_examples=30, deadline=None)
    @given(small_graphs(max_n=7))
    def test_against_subset_enumeration(self, g):
        counts = np.exp(enumerate_matchings(g).log_c)
        assert np.allclose(counts, brute_matching_counts(g))

    def test_cap(self):
        with pytest.raises(TooLarge):
            enumerate_matchings(Graph.complete(8))


# --- Ising and random cluster ------------------------------------------------------


class TestIsing:
    def test_uniform_fields_give_n_plus(self):
        spec = IsingSpec.uniform(P3, 2.0, 0.7, 0.3)
        m, b = enumerate_ising(P3, spec)
        assert np.allclose(m.x, [0, 1, 2, 3])
        assert b.beta_max == pytest.approx(-1 / spec.eta)

    def test_single_vertex(self):
        g = Graph.empty(1)
        spec = IsingSpec(np.array([]), np.array([0.6]), 0.4)
        m, b = enumerate_ising(g, spec)
        assert math.exp(log_partition(m, b.beta_max)) == pytest.approx(1.6)

    @settings(max_examples=40, deadline=None)
    @given(ising_cases())
    def test_histogram_matches_direct(self, case):
        g, spec = case
        m, b = enumerate_ising(g, spec)
        assert log_partition(m, b.beta_max) == pytest.approx(math.log(brute_ising_z(g, spec)), rel=1e-10, abs=1e-10)
        assert math.exp(log_partition(m, -math.inf)) == pytest.approx(float(np.prod(spec.gamma)), rel=1e-10)
        assert np.all((m.x == 0) | (m.x >= 1))

    @settings(max_examples=40, deadline=None)
    @given(ising_cases())
    def test_bounds_dominate(self, case):
        g, spec = case
        m, b = enumerate_ising(g, spec)
        assert b.q == g.n
        q, h = exact_bounds(m, b.beta_min, b.beta_max)
        assert q <= b.q + 1e-9
        assert h <= g.n * spec.eta / math.e + 1e-9

    def test_slack_violation(self):
        with pytest.raises(InvalidParameter):
            IsingSpec(np.array([1.1]), np.array([0.5, 0.5]), 0.2)
        with pytest.raises(InvalidParameter):
            IsingSpec(np.array([2.0]), np.array([0.9, 0.5]), 0.2)

    def test_marginal_single_vertex(self):
        g = Graph.empty(1)
        spec = IsingSpec(np.array([]), np.array([0.5]), 0.5)
        assert ising_marginals(g, spec)[0] == pytest.approx(0.5 / 1.5)

    def test_marginal_zero_field(self):
        spec = IsingSpec(np.array([2.0]), np.array([0.0, 0.5]), 0.5)
        assert ising_marginals(K2, spec)[0] == 0.0

    @settings(max_examples=40, deadline=None)
    @given(ising_cases())
    def test_marginal_bound(self, case):
        g, spec = case
        assert ising_marginal_bound_check(g, spec) <= 1e-12


class TestRandomCluster:
    def test_empty_graph(self):
        g = Graph.empty(3)
        spec = RandomClusterSpec(np.array([]), np.array([0.1, 0.5, 0.0]))
        assert math.exp(enumerate_rc(g, spec)) == pytest.approx(1.1 * 1.5 * 1.0)

    def test_k2_value(self):
        spec = RandomClusterSpec(np.array([0.5]), np.array([0.5, 0.5]))
        assert math.exp(enumerate_rc(K2, spec)) == pytest.approx(1.75, rel=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(small_graphs(max_n=5), st.data())
    def test_against_brute(self, g, data):
        p = np.array([data.draw(st.floats(0.01, 0.99)) for _ in range(g.m)])
        lam = np.array([data.draw(st.floats(0.0, 0.99)) for _ in range(g.n)])
        spec = RandomClusterSpec(p, lam)
        assert enumerate_rc(g, spec) == pytest.approx(math.log(brute_rc_z(g, spec)), rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("g", [TRIANGLE, P4])
    def test_identity(self, g):
        rng = np.random.default_rng(3)
        for _ in range(10):
            delta = rng.uniform(0.05, 0.8)
            spec = IsingSpec(1 + delta + rng.uniform(0, 3, g.m), rng.uniform(0, 1 - delta, g.n), delta)
            assert ising_rc_identity_check(g, spec) <= 1e-10

    def test_mapping(self):
        spec = IsingSpec(np.array([2.0, 4.0]), np.array([0.1, 0.2, 0.3]), 0.5)
        assert np.allclose(rc_from_ising(spec).p, [0.5, 0.75])

    def test_cap(self):
        with pytest.raises(TooLarge):
            rc_subset_log_weights(Graph.complete(8), RandomClusterSpec(np.full(28, 0.5), np.zeros(8)))


def tv(counts, probs):
    emp = counts / counts.sum()
    return 0.5 * np.abs(emp - probs).sum()


def spins_to_index(spins):
    return int(sum(1 << v for v, s in enumerate(spins) if s > 0))


class TestEdwardsSokal:
    def test_zero_field_component(self):
        spec = RandomClusterSpec(np.array([0.5, 0.5]), np.array([0.9, 0.0, 0.9]))
        s = edwards_sokal_spin(P3, np.array([True, True]), spec, np.random.default_rng(0))
        assert np.all(s == -1)

    def test_fair_coin(self):
        g = Graph.empty(1)
        spec = RandomClusterSpec(np.array([]), np.array([0.999999]))
        rng = np.random.default_rng(1)
        ups = sum(edwards_sokal_spin(g, np.array([], dtype=bool), spec, rng)[0] > 0 for _ in range(20000))
        assert abs(ups / 20000 - 0.999999 / 1.999999) < 5 * math.sqrt(0.25 / 20000)

    @pytest.mark.parametrize("g", [K2, P3])
    def test_composite_matches_ising(self, g):
        ising = IsingSpec.uniform(g, 2.5, 0.4, 0.5)
        rc = rc_from_ising(ising)
        rng = np.random.default_rng(7)
        counts = np.zeros(1 << g.n)
        for _ in range(10_000):
            s = edwards_sokal_spin(g, sample_rc(g, rc, 0.1, rng), rc, rng)
            counts[spins_to_index(s)] += 1
        assert tv(counts, ising_configuration_probabilities(g, ising)) <= 0.02


class TestFieldDynamics:
    def test_tilt_value(self):
        assert tilt(np.array([0.5]), 0.5, np.array([True]))[0] == pytest.approx(2 / 3)

    def test_tilt_limit(self):
        p = np.array([0.3, 0.8])
        assert np.allclose(tilt(p, 1 - 1e-12, np.array([True, True])), p)

    def test_unavailable_edges_closed(self):
        p = np.array([0.5, 0.5])
        assert np.all(tilt(p, 0.5, np.array([False, True])) == [0.0, 2 / 3])
        spec = RandomClusterSpec(p, np.array([0.1, 0.1, 0.1]))
        rng = np.random.default_rng(0)
        for _ in range(50):
            seen = []

            def inner(g, p_star, lam, x, r):
                seen.append(p_star.copy())
                return p_star > 0

            out = field_dynamics_step(P3, np.zeros(2, dtype=bool), spec, 0.3, rng, inner)
            assert np.all(out == (seen[0] > 0))

    def test_theta_range(self):
        spec = RandomClusterSpec(np.array([0.5]), np.array([0.1, 0.1]))
        for theta in (0.0, 1.0, 1.5):
            with pytest.raises(InvalidParameter):
                field_dynamics_step(K2, np.ones(1, dtype=bool), spec, theta, np.random.default_rng(0))

    def test_c1(self):
        spec = RandomClusterSpec(np.array([0.5]), np.array([0.5, 0.5]))
        assert rc_params(2, spec, 0.1).c1 == pytest.approx(2.5e-28, rel=1e-12)

    def test_brute_branch_law(self):
        spec = RandomClusterSpec(np.array([0.4, 0.7]), np.array([0.2, 0.5, 0.3]))
        draws = sample_rc_brute(P3, spec, np.random.default_rng(2), size=10_000)
        idx = draws @ (1 << np.arange(2))
        probs = np.exp(rc_subset_log_weights(P3, spec) - enumerate_rc(P3, spec))
        assert tv(np.bincount(idx, minlength=4).astype(float), probs) <= 0.02

    def test_override_branch_law(self):
        spec = RandomClusterSpec(np.array([0.5]), np.array([0.5, 0.5]))
        rng = np.random.default_rng(3)
        draws = np.array([sample_rc(K2, spec, 0.1, rng, {"theta": 0.5, "T": 200})[0] for _ in range(2000)])
        probs = np.exp(rc_subset_log_weights(K2, spec) - enumerate_rc(K2, spec))
        counts = np.array([np.sum(~draws), np.sum(draws)], dtype=float)
        assert tv(counts, probs) <= 0.05


# --- Glauber ------------------------------------------------------------------------


def heat_bath_matrix(g, spec, lam):
    """Transition matrix of the single-site heat-bath chain, built from conditional odds."""
    n = g.n
    size = 1 << n
    P = np.zeros((size, size))
    for s in range(size):
        spins = [1 if s >> v & 1 else -1 for v in range(n)]
        for v in range(n):
            k_plus = sum(spins[w] > 0 for w in g.adjacency[v])
            k_minus = len(g.adjacency[v]) - k_plus
            up = lam * spec.gamma1**k_plus
            down = spec.gamma2**k_minus
            p = up / (up + down)
            P[s, s | (1 << v)] += p / n
            P[s, s & ~(1 << v)] += (1 - p) / n
    return P


def two_spin_law(g, spec):
    w = []
    for s in range(1 << g.n):
        spins = [1 if s >> v & 1 else -1 for v in range(g.n)]
        n_plus = sum(x > 0 for x in spins)
        m_plus = sum(spins[u] > 0 and spins[v] > 0 for u, v in g.edges)
        m_minus = sum(spins[u] < 0 and spins[v] < 0 for u, v in g.edges)
        w.append(spec.lam**n_plus * spec.gamma1**m_plus * spec.gamma2**m_minus)
    w = np.array(w)
    return w / w.sum()


class TestGlauber:
    @pytest.mark.parametrize("spec", [TwoSpinSpec(0.3, 1.2, 0.8), TwoSpinSpec(0.0, 1.0, 1.5), TwoSpinSpec(0.5, 0.5, 2.0)])
    def test_detailed_balance(self, spec):
        P = heat_bath_matrix(P3, spec, spec.lam)
        pi = two_spin_law(P3, spec)
        flow = pi[:, None] * P
        assert np.allclose(flow, flow.T, atol=1e-15)
        assert np.allclose(P.sum(axis=1), 1.0)

    def test_chain_uses_heat_bath_rule(self):
        """One kernel step from a fixed state matches the transition-matrix row."""
        spec = TwoSpinSpec(0.3, 1.2, 0.8)
        P = heat_bath_matrix(P3, spec, spec.lam)
        rng = np.random.default_rng(0)
        counts = np.zeros(8)
        for _ in range(40_000):
            counts[spins_to_index(glauber_two_spin(P3, spec, math.log(spec.lam), 1, rng))] += 1
        assert tv(counts, P[0]) <= 0.01

    def test_free_spins_bernoulli(self):
        spec = TwoSpinSpec(1.0, 1.0, 0.6)
        o = oracle_from_glauber(Graph.cycle(5), spec, 200, 1)
        x = o.draw(math.log(0.6), 4000, 0)
        p = 0.6 / 1.6
        assert abs(x.mean() / 5 - p) <= 3 * math.sqrt(p * (1 - p) / (5 * 4000))

    def test_hardcore_k2_stationary(self):
        spec = TwoSpinSpec.hardcore(1.0)
        rng = np.random.default_rng(5)
        counts = np.zeros(4)
        from gibbsanneal import kernels

        indptr, nbr, eid = K2.csr
        spins = np.full((1, 2), -1, dtype=np.int8)
        logs = (np.full(1, -np.inf), np.zeros(1), np.zeros(2))
        for _ in range(100_000):
            kernels.spin_glauber(indptr, nbr, eid, *logs, spins, rng.random((1, 2)))
            counts[spins_to_index(spins[0])] += 1
        assert counts[3] == 0
        assert tv(counts, np.array([1, 1, 1, 0]) / 3) <= 0.02

    def test_matchings_k2_occupancy(self):
        lam = 2.0
        o = oracle_from_glauber(K2, lam, 20, 3)
        x = o.draw(math.log(lam), 20_000, 0)
        p = lam / (1 + lam)
        assert abs(x.mean() - p) <= 4 * math.sqrt(p * (1 - p) / 20_000)

    def test_single_matching_chain(self):
        m = glauber_matchings(TRIANGLE, 1.0, 100, np.random.default_rng(0))
        assert m.sum() <= 1

    def test_zero_steps(self):
        o = oracle_from_glauber(P4, TwoSpinSpec.hardcore(1.0), 0, 1)
        assert np.all(o.draw(0.0, 10, 0) == 0)
        f = oracle_from_glauber(P4, TwoSpinSpec(0.5, 1.0, 1.0), 0, 1, kind="flipped")
        assert np.all(f.draw(0.0, 10, 0) == 4)

    def test_replay(self):
        o = oracle_from_glauber(P4, TwoSpinSpec.hardcore(1.0), 30, 9)
        assert np.array_equal(o.draw(-0.5, 100, 2), o.draw(-0.5, 100, 2))
        assert o.draws == 200

    def test_minus_infinity(self):
        o = oracle_from_glauber(P4, TwoSpinSpec.hardcore(1.0), 30, 9)
        assert np.all(o.draw(-math.inf, 5, 0) == 0)

    @pytest.mark.parametrize("name", ["p4_hardcore", "c5_antiferro_flipped", "p4_matchings", "p4_ising"])
    def test_oracle_law_matches_histogram(self, name):
        inst = builtin(name)
        beta = inst.bounds.beta_max
        o = inst.glauber_oracle(4, 200)
        x = o.draw(beta, 20_000, 0)
        model = inst.model
        probs = np.exp(model.log_c + beta * model.x - log_partition(model, beta))
        counts = np.array([np.sum(np.isclose(x, v)) for v in model.x], dtype=float)
        assert counts.sum() == 20_000
        assert tv(counts, probs) <= 0.02


# --- reformulation soundness -----------------------------------------------------------


@pytest.mark.parametrize("name", ["p4_hardcore", "c5_antiferro", "c5_antiferro_flipped", "triangle_matchings", "p4_ising"])
def test_reformulation_recovers_partition_function(name):
    inst = builtin(name)
    assert inst.exact_log_z() == pytest.approx(inst.direct_log_z(), rel=1e-10)
    b = inst.pipeline_bounds
    rep = estimate_nonadaptive(ExactOracle(inst.model, 0), b, 0.2, 1)
    log_z_hat = rep.log_q_hat + log_partition(inst.model, b.beta_min) + inst.log_scale
    assert abs(log_z_hat - inst.direct_log_z()) < 0.2


def test_exact_log_q_p4():
    inst = builtin("p4_hardcore")
    assert inst.exact_log_q() == pytest.approx(math.log(8))
    assert log_ratio(inst.model, -math.inf, 0.0) == pytest.approx(math.log(8))
    assert mean_hamiltonian(inst.model, 0.0) == pytest.approx(10 / 8)
