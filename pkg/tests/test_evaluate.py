import math

import numpy as np
import pytest

from gof import counts, evaluate
from gof.errors import InputError
from gof.graphs import SimpleGraph
from gof.patterns import C3, P3
from gof.rng import make_generator


def packed_batch(rng, n_graphs, n, p):
    return rng.random((n_graphs, math.comb(n, 2))) < p


def test_functional_registry():
    assert evaluate.FUNCTIONALS == ("vn", "sc3", "sp3", "tc3")
    assert evaluate.FUNCTIONAL_MIN_N["vn"] == 7
    for f in evaluate.FUNCTIONALS:
        assert evaluate.check_functional(f) == f
    with pytest.raises(InputError):
        evaluate.check_functional("s4")


def test_observed_statistic_on_star():
    star = SimpleGraph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    assert evaluate.observed_statistic(star, "vn") == pytest.approx(1.44)
    assert evaluate.observed_statistic(star, "tc3") == 0.0
    assert evaluate.observed_statistic(star, "sc3") == pytest.approx(
        counts.centered_count_estimated(C3, star)
    )
    assert evaluate.observed_statistic(star, "sp3") == pytest.approx(
        counts.centered_count_estimated(P3, star)
    )


@pytest.mark.parametrize("n", [8, 23])
def test_batch_matches_scalar_evaluation(n):
    rng = make_generator(41)
    packed = packed_batch(rng, 40, n, 0.35)
    stats = evaluate.batch_statistics(packed, n, evaluate.FUNCTIONALS)
    for b in range(packed.shape[0]):
        g = SimpleGraph.from_packed(n, packed[b])
        assert stats["p_hat"][b] == pytest.approx(g.mean_connectivity_hat())
        for f in evaluate.FUNCTIONALS:
            assert stats[f][b] == pytest.approx(
                evaluate.observed_statistic(g, f), abs=1e-8
            ), f"functional {f}, graph {b}"


def test_batch_chunking_boundaries(monkeypatch):
    """Force several matmul chunks and a ragged final chunk."""
    n = 9
    monkeypatch.setattr(evaluate, "_DEFAULT_CHUNK_FLOATS", n * n * 7)
    rng = make_generator(42)
    packed = packed_batch(rng, 23, n, 0.5)
    stats = evaluate.batch_statistics(packed, n, ("sc3", "tc3"))
    for b in range(23):
        g = SimpleGraph.from_packed(n, packed[b])
        assert stats["tc3"][b] == evaluate.observed_statistic(g, "tc3")
        assert stats["sc3"][b] == pytest.approx(
            evaluate.observed_statistic(g, "sc3"), abs=1e-9
        )


def test_batch_triangle_counts_are_integral():
    rng = make_generator(43)
    packed = packed_batch(rng, 30, 12, 0.6)
    tc3 = evaluate.batch_statistics(packed, 12, ("tc3",))["tc3"]
    assert np.all(tc3 == np.round(tc3))


def test_batch_shape_validation():
    with pytest.raises(InputError):
        evaluate.batch_statistics(np.zeros((4, 5), dtype=bool), 4, ("vn",))
    with pytest.raises(InputError):
        evaluate.batch_statistics(np.zeros(6, dtype=bool), 4, ("vn",))


def test_batch_unknown_functional():
    with pytest.raises(InputError):
        evaluate.batch_statistics(np.zeros((2, 6), dtype=bool), 4, ("vn", "nope"))


def test_empty_and_full_graphs_evaluate_cleanly():
    n = 10
    packed = np.stack([np.zeros(45, dtype=bool), np.ones(45, dtype=bool)])
    stats = evaluate.batch_statistics(packed, n, evaluate.FUNCTIONALS)
    assert stats["p_hat"].tolist() == [0.0, 1.0]
    assert stats["vn"].tolist() == [0.0, 0.0]
    assert stats["tc3"].tolist() == [0.0, float(math.comb(10, 3))]
