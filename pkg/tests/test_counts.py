import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gof import counts, oracle
from gof.errors import InputError, UnsupportedSizeError
from gof.graphs import SimpleGraph
from gof.patterns import C3, D3, E3, H3, P2, P3, SubgraphPattern
from gof.rng import make_generator

K4 = SimpleGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
C5 = SimpleGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
PATH4 = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
STAR6 = SimpleGraph.from_edges(6, [(0, k) for k in range(1, 6)])
EMPTY4 = SimpleGraph.from_edges(4, [])

P4_PATTERN = SubgraphPattern(4, ((0, 1), (1, 2), (2, 3)), "P4")
K4_PATTERN = SubgraphPattern(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), "K4")
EDGELESS3 = SubgraphPattern(3, ())


def rand_graph(rng, n, p):
    return SimpleGraph.from_packed(n, rng.random(n * (n - 1) // 2) < p)


class TestRawCounts:
    def test_known_values(self):
        assert counts.raw_count(C3, K4) == 4
        assert counts.raw_count(P3, C5) == 5
        assert counts.raw_count(H3, K4) == 3
        assert counts.raw_count(P2, STAR6) == 5
        assert counts.raw_count(P3, STAR6) == 10
        assert counts.raw_count(C3, STAR6) == 0
        assert counts.raw_count(H3, STAR6) == 0
        assert counts.raw_count(P3, PATH4) == 2
        assert counts.raw_count(H3, PATH4) == 1

    def test_isolate_patterns_factorize(self):
        # D3 = P3 plus a free vertex, E3 = C3 plus a free vertex.
        assert counts.raw_count(D3, K4) == 12
        assert counts.raw_count(E3, K4) == 4
        assert counts.raw_count(D3, C5) == 5 * 2
        assert counts.raw_count(E3, C5) == 0

    def test_edgeless_pattern_counts_vertex_subsets(self):
        assert counts.raw_count(EDGELESS3, STAR6) == math.comb(6, 3)
        assert counts.raw_count(EDGELESS3, EMPTY4) == 4

    def test_pattern_larger_than_graph(self):
        g3 = SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert counts.raw_count(H3, g3) == 0

    def test_generic_path_matches_brute_force(self):
        rng = make_generator(21)
        for _ in range(5):
            g = rand_graph(rng, 8, 0.5)
            for pattern in (P4_PATTERN, K4_PATTERN):
                assert counts.raw_count(pattern, g) == oracle.brute_force_raw_count(
                    pattern, g
                )


class TestCenteredCounts:
    def test_known_values(self):
        triangle = SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert counts.centered_count(P2, triangle, 0.5) == pytest.approx(1.5)
        assert counts.centered_count(C3, EMPTY4, 0.5) == pytest.approx(-0.5)

    def test_matches_brute_force_on_random_graphs(self):
        rng = make_generator(22)
        for _ in range(4):
            g = rand_graph(rng, 7, 0.45)
            for pattern in (P2, P3, C3, H3):
                for p in (0.3, 0.62):
                    got = counts.centered_count(pattern, g, p)
                    ref = oracle.brute_force_centered_count(pattern, g, p)
                    assert got == pytest.approx(ref, abs=1e-10)

    def test_isolate_patterns_factorize(self):
        rng = make_generator(23)
        g = rand_graph(rng, 7, 0.4)
        for p in (0.3, 0.7):
            want = counts.centered_count(P3, g, p) * (7 - 3)
            assert counts.centered_count(D3, g, p) == pytest.approx(want)
            want = counts.centered_count(C3, g, p) * (7 - 3)
            assert counts.centered_count(E3, g, p) == pytest.approx(want)

    def test_estimated_single_edge_count_is_exactly_zero(self):
        rng = make_generator(24)
        for _ in range(10):
            g = rand_graph(rng, 11, rng.uniform(0.1, 0.9))
            assert counts.centered_count_estimated(P2, g) == 0.0

    def test_estimated_count_uses_plug_in_density(self):
        g = rand_graph(make_generator(25), 9, 0.5)
        want = counts.centered_count(C3, g, g.mean_connectivity_hat())
        assert counts.centered_count_estimated(C3, g) == pytest.approx(want)


def test_plug_in_two_path_count_has_exact_negative_mean():
    """Centering S_n(P3) at the estimated density shifts its null mean to
    -(n-2) p (1-p) exactly; the shift is what keeps the plug-in statistic
    from being pivotal at moderate n."""
    for n, p in ((4, 0.3), (5, 0.3), (5, 0.6)):
        exact = oracle.exact_null_moments(
            lambda g: counts.centered_count_estimated(P3, g), n, p
        )
        assert exact.mean == pytest.approx(-(n - 2) * p * (1 - p), abs=1e-12)


class TestDegreeVariance:
    def test_regular_graph_has_zero_variance(self):
        assert counts.degree_variance(C5) == 0.0
        assert counts.degree_variance(K4) == 0.0

    def test_star_value(self):
        assert counts.degree_variance(STAR6) == pytest.approx(np.var([5, 1, 1, 1, 1, 1]))

    def test_decomposition_identity_random(self):
        rng = make_generator(31)
        for _ in range(50):
            n = int(rng.integers(4, 31))
            g = rand_graph(rng, n, rng.uniform(0.1, 0.9))
            p = rng.uniform(0.0, 1.0)
            decomp = counts.vn_decomposition(g, p)
            assert decomp.total == pytest.approx(counts.degree_variance(g), abs=1e-10)

    def test_decomposition_needs_four_vertices(self):
        g = SimpleGraph.from_edges(3, [(0, 1)])
        with pytest.raises(UnsupportedSizeError):
            counts.vn_decomposition(g, 0.5)

    def test_decomposition_coefficients(self):
        decomp = counts.vn_decomposition(EMPTY4, 0.25)
        n, p = 4, 0.25
        assert decomp.a1 == pytest.approx(2 * (n - 2) * (1 - 2 * p) / n**2)
        assert decomp.a2 == pytest.approx(2 * (n - 4) / n**2)
        assert decomp.a3 == pytest.approx(-8 / n**2)
        assert decomp.baseline == pytest.approx((n - 1) * (n - 2) * p * (1 - p) / n)


def test_triangle_identity_random_graphs():
    """T_n(C3) = S_n(C3) + p S_n(P3) + p^2 (n-2) S_n(P2) + C(n,3) p^3."""
    rng = make_generator(32)
    for _ in range(40):
        n = int(rng.integers(3, 40))
        g = rand_graph(rng, n, rng.uniform(0.05, 0.95))
        p = rng.uniform(0.0, 1.0)
        rhs = (
            counts.centered_count(C3, g, p)
            + p * counts.centered_count(P3, g, p)
            + p * p * (n - 2) * counts.centered_count(P2, g, p)
            + math.comb(n, 3) * p**3
        )
        assert counts.raw_count(C3, g) == pytest.approx(rhs, abs=1e-9)


class TestNullMoments:
    def test_sn_values(self):
        cases = {
            (4, 0.3): {"P2": 1.26, "P3": 0.5292, "C3": 0.037044, "H3": 0.1323},
            (5, 0.3): {"P2": 2.1, "P3": 1.323, "C3": 0.09261, "H3": 0.6615},
        }
        by_name = {"P2": P2, "P3": P3, "C3": C3, "H3": H3}
        for (n, p), expected in cases.items():
            for name, var in expected.items():
                got = counts.sn_null_moments(by_name[name], n, p)
                assert got.mean == 0.0
                assert got.variance == pytest.approx(var, rel=1e-12)

    def test_aut_scaled_convention_differs_by_aut_squared(self):
        plain = counts.sn_null_moments(C3, 6, 0.4).variance
        scaled = counts.sn_null_moments(C3, 6, 0.4, convention="aut-scaled").variance
        assert scaled == pytest.approx(36 * plain)

    def test_unknown_convention(self):
        with pytest.raises(InputError):
            counts.sn_null_moments(C3, 6, 0.4, convention="bogus")

    def test_isolate_pattern_rejected(self):
        with pytest.raises(InputError):
            counts.sn_null_moments(D3, 8, 0.4)

    def test_too_small_n_rejected(self):
        with pytest.raises(InputError):
            counts.sn_null_moments(H3, 3, 0.4)

    def test_vn_values(self):
        got = counts.vn_null_moments(100, 0.3)
        assert got.mean == pytest.approx(20.3742)
        assert got.variance == pytest.approx(8.2821937968)

    def test_tn_values(self):
        for (n, p), (mean, var) in {
            (4, 0.3): (0.108, 0.125496),
            (5, 0.3): (0.27, 0.36477),
            (4, 0.5): (0.5, 0.625),
            (5, 0.5): (1.25, 2.03125),
        }.items():
            got = counts.tn_c3_null_moments(n, p)
            assert got.mean == pytest.approx(mean, rel=1e-12)
            assert got.variance == pytest.approx(var, rel=1e-12)

    def test_invalid_probability(self):
        with pytest.raises(InputError):
            counts.vn_null_moments(10, 1.5)


@st.composite
def small_graph_and_perm(draw):
    n = draw(st.integers(min_value=4, max_value=9))
    bits = draw(
        st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2)
    )
    perm = draw(st.permutations(list(range(n))))
    return SimpleGraph.from_packed(n, np.array(bits, dtype=bool)), perm


@settings(max_examples=50, deadline=None)
@given(small_graph_and_perm())
def test_counts_are_isomorphism_invariant(gp):
    g, perm = gp
    h = g.relabel(perm)
    for pattern in (P3, C3, H3):
        assert counts.raw_count(pattern, g) == counts.raw_count(pattern, h)
        assert counts.centered_count(pattern, g, 0.37) == pytest.approx(
            counts.centered_count(pattern, h, 0.37), abs=1e-10
        )
