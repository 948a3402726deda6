"""Independent brute-force references and a self-verification suite.

The routines here deliberately avoid the closed forms in
:mod:`gof.counts`.  Raw and centered counts are recomputed from injective
vertex maps, and null moments are recomputed by enumerating every graph
on a small vertex set with its exact probability.  The verification
suite cross-checks the production formulas against these references and
is exposed through the command line so the arbitration can be re-run on
any install.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable

import numpy as np

from . import counts, power
from .errors import UnsupportedSizeError
from .graphs import SimpleGraph
from .patterns import C3, H3, P2, P3, SubgraphPattern
from .rng import make_generator

MAX_BRUTE_GRAPH_VERTICES = 10
MAX_BRUTE_PATTERN_VERTICES = 4
MAX_ENUMERATION_VERTICES = 5


def brute_force_raw_count(pattern: SubgraphPattern, graph: SimpleGraph) -> int:
    """Count copies by enumerating injective vertex maps.

    Each copy is hit once per automorphism, so the map count divides
    exactly by the automorphism count.
    """
    _check_brute_sizes(pattern, graph)
    adj = graph.adjacency
    hits = 0
    for image in permutations(range(graph.n), pattern.n_vertices):
        if all(adj[image[u], image[v]] for u, v in pattern.edges):
            hits += 1
    aut = pattern.automorphism_count()
    assert hits % aut == 0
    return hits // aut


def brute_force_centered_count(
    pattern: SubgraphPattern, graph: SimpleGraph, p: float
) -> float:
    """Centered count via injective maps over the centered adjacency."""
    _check_brute_sizes(pattern, graph)
    centered = graph.adjacency.astype(np.float64) - p
    np.fill_diagonal(centered, 0.0)
    total = 0.0
    for image in permutations(range(graph.n), pattern.n_vertices):
        prod = 1.0
        for u, v in pattern.edges:
            prod *= centered[image[u], image[v]]
        total += prod
    return total / pattern.automorphism_count()


def _check_brute_sizes(pattern: SubgraphPattern, graph: SimpleGraph) -> None:
    if pattern.n_vertices > MAX_BRUTE_PATTERN_VERTICES:
        raise UnsupportedSizeError(
            f"brute-force counting capped at {MAX_BRUTE_PATTERN_VERTICES} pattern vertices"
        )
    if graph.n > MAX_BRUTE_GRAPH_VERTICES:
        raise UnsupportedSizeError(
            f"brute-force counting capped at {MAX_BRUTE_GRAPH_VERTICES} graph vertices"
        )


def all_graphs(n: int):
    """Yield (graph, edge_count) over every labelled graph on n vertices."""
    if n > MAX_ENUMERATION_VERTICES:
        raise UnsupportedSizeError(
            f"graph enumeration capped at {MAX_ENUMERATION_VERTICES} vertices"
        )
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        yield SimpleGraph.from_edges(n, edges), len(edges)


def exact_null_moments(
    stat: Callable[[SimpleGraph], float], n: int, p: float
) -> counts.MomentPair:
    """Exact mean and variance of a statistic under the homogeneous null.

    Sums the statistic over all 2^C(n,2) graphs weighted by their exact
    probabilities, so it is limited to very small n.
    """
    total_pairs = math.comb(n, 2)
    mean = 0.0
    second = 0.0
    for graph, m in all_graphs(n):
        weight = p ** m * (1.0 - p) ** (total_pairs - m)
        value = stat(graph)
        mean += weight * value
        second += weight * value * value
    return counts.MomentPair(mean, second - mean * mean)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _reference_graphs() -> list[SimpleGraph]:
    rng = make_generator(7)
    fixed = [
        SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]),
        SimpleGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
        SimpleGraph.from_edges(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
    ]
    for n in (7, 8):
        iu = np.triu_indices(n, 1)
        packed = rng.random(len(iu[0])) < 0.45
        fixed.append(SimpleGraph.from_packed(n, packed))
    return fixed


def verification_suite(sn_variance_convention: str = "per-copy") -> list[CheckResult]:
    """Cross-check production formulas against the brute-force references.

    The variance convention argument is forwarded to the closed-form null
    moments so that the (incorrect) aut-scaled alternative can be shown
    to fail the arbitration check.
    """
    results: list[CheckResult] = []
    patterns = [P2, P3, C3, H3]

    worst = 0
    for graph in _reference_graphs():
        for pattern in patterns:
            got = counts.raw_count(pattern, graph)
            ref = brute_force_raw_count(pattern, graph)
            worst = max(worst, abs(got - ref))
    results.append(
        CheckResult(
            "raw counts: closed forms vs injective-map enumeration",
            worst == 0,
            f"max abs deviation {worst}",
        )
    )

    worst_f = 0.0
    for graph in _reference_graphs():
        for pattern in patterns:
            for p in (0.3, 0.5):
                got = counts.centered_count(pattern, graph, p)
                ref = brute_force_centered_count(pattern, graph, p)
                worst_f = max(worst_f, abs(got - ref))
    results.append(
        CheckResult(
            "centered counts: closed forms vs injective-map enumeration",
            worst_f < 1e-9,
            f"max abs deviation {worst_f:.3g}",
        )
    )

    worst_f = 0.0
    for pattern in (P2, P3, C3):
        for n in (4, 5):
            for p in (0.3, 0.5):
                exact = exact_null_moments(
                    lambda g, pat=pattern, pp=p: counts.centered_count(pat, g, pp), n, p
                )
                formula = counts.sn_null_moments(
                    pattern, n, p, convention=sn_variance_convention
                )
                worst_f = max(
                    worst_f,
                    abs(exact.mean - formula.mean),
                    abs(exact.variance - formula.variance),
                )
    results.append(
        CheckResult(
            "centered-count null variance: convention arbitration vs exact enumeration",
            worst_f < 1e-10,
            f"convention={sn_variance_convention}, max abs deviation {worst_f:.3g}",
        )
    )

    worst_f = 0.0
    for n in (4, 5):
        for p in (0.3, 0.5):
            exact = exact_null_moments(counts.degree_variance, n, p)
            formula = counts.vn_null_moments(n, p)
            worst_f = max(
                worst_f,
                abs(exact.mean - formula.mean),
                abs(exact.variance - formula.variance),
            )
    results.append(
        CheckResult(
            "degree-variance null moments vs exact enumeration",
            worst_f < 1e-10,
            f"max abs deviation {worst_f:.3g}",
        )
    )

    worst_f = 0.0
    for n in (4, 5):
        for p in (0.3, 0.5):
            exact = exact_null_moments(lambda g: float(counts.raw_count(C3, g)), n, p)
            formula = counts.tn_c3_null_moments(n, p)
            worst_f = max(
                worst_f,
                abs(exact.mean - formula.mean),
                abs(exact.variance - formula.variance),
            )
    results.append(
        CheckResult(
            "raw-triangle null moments vs exact enumeration",
            worst_f < 1e-10,
            f"max abs deviation {worst_f:.3g}",
        )
    )

    worst_f = 0.0
    for graph, _ in all_graphs(4):
        for p in (0.2, 0.5, 0.8):
            decomp = counts.vn_decomposition(graph, p)
            worst_f = max(worst_f, abs(decomp.total - counts.degree_variance(graph)))
    results.append(
        CheckResult(
            "degree-variance decomposition identity (exhaustive n=4)",
            worst_f < 1e-10,
            f"max abs deviation {worst_f:.3g}",
        )
    )

    worst_f = 0.0
    for graph, _ in all_graphs(4):
        n = graph.n
        for p in (0.2, 0.5, 0.8):
            lhs = counts.raw_count(C3, graph)
            rhs = (
                counts.centered_count(C3, graph, p)
                + p * counts.centered_count(P3, graph, p)
                + p * p * (n - 2) * counts.centered_count(P2, graph, p)
                + math.comb(n, 3) * p ** 3
            )
            worst_f = max(worst_f, abs(lhs - rhs))
    results.append(
        CheckResult(
            "raw/centered triangle identity (exhaustive n=4)",
            worst_f < 1e-10,
            f"max abs deviation {worst_f:.3g}",
        )
    )

    partition_ok = True
    literal_differs = False
    detail = ""
    for n, p_in, p_out in ((20, 0.5, 0.3), (50, 0.25, 0.15), (40, 0.3, 0.3)):
        spec = power.SbmSpec2(n=n, p_intra=p_in, p_inter=p_out)
        corrected = power.expected_induced_counts_sbm(spec)
        total = sum(corrected)
        if abs(total - math.comb(n, 3)) > 1e-8 * math.comb(n, 3):
            partition_ok = False
            detail = f"corrected partition off by {total - math.comb(n, 3):.3g} at n={n}"
        if p_in != p_out:
            literal = power.expected_induced_counts_sbm(spec, e3_literal=True)
            if abs(sum(literal) - math.comb(n, 3)) > 1e-8 * math.comb(n, 3):
                literal_differs = True
    results.append(
        CheckResult(
            "block-model induced expectations: partition identity arbitration",
            partition_ok and literal_differs,
            detail or "corrected variant partitions all triples; literal variant does not",
        )
    )

    return results
