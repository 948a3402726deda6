"""Subgraph-count statistics and their null moments.

Raw counts T_n(H) count copies of a pattern H in the observed graph.
Centered counts S_n(H) replace each edge indicator by (A_ij - p), which
makes distinct copies orthogonal under the homogeneous null and gives
S_n(H) mean zero and variance copies(H, n) * (p(1-p))^edges(H).

Closed forms are provided for the patterns the theory uses (edge,
2-path, triangle, two disjoint edges); everything else falls back to
subset enumeration with documented size caps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import NamedTuple

import numpy as np

from .errors import InputError, UnsupportedSizeError
from .graphs import SimpleGraph
from .patterns import C3, H3, P2, P3, SubgraphPattern, copies_count

MAX_GENERIC_PATTERN_VERTICES = 5
MAX_GENERIC_GRAPH_VERTICES = 64

_KEY_P2 = P2.canonical_form()
_KEY_P3 = P3.canonical_form()
_KEY_C3 = C3.canonical_form()
_KEY_H3 = H3.canonical_form()


class MomentPair(NamedTuple):
    mean: float
    variance: float


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    return p


# ---------------------------------------------------------------------------
# Raw counts


def raw_count(pattern: SubgraphPattern, graph: SimpleGraph) -> int:
    """Number of copies of the pattern appearing in the graph."""
    key = pattern.canonical_form()
    n = graph.n
    if key == _KEY_P2:
        return graph.edge_count()
    if key == _KEY_P3:
        deg = graph.degrees()
        return int(sum(math.comb(int(d), 2) for d in deg))
    if key == _KEY_C3:
        return _triangle_count(graph)
    if key == _KEY_H3:
        m = graph.edge_count()
        shared = sum(math.comb(int(d), 2) for d in graph.degrees())
        return int(math.comb(m, 2) - shared)
    if not pattern.edges:
        return math.comb(n, pattern.n_vertices)
    iso = _isolated_pattern_vertices(pattern)
    if iso:
        core, k_iso = iso
        if n < pattern.n_vertices:
            return 0
        return raw_count(core, graph) * math.comb(n - core.n_vertices, k_iso)
    return _generic_raw_count(pattern, graph)


def _triangle_count(graph: SimpleGraph) -> int:
    a = graph.adjacency.astype(np.float64)
    # Exact: every intermediate integer stays far below 2**53.
    return int(round(((a @ a) * a).sum() / 6.0))


def _isolated_pattern_vertices(pattern: SubgraphPattern):
    """Split off isolated vertices; return (core pattern, count) or None.

    Only meaningful for patterns with at least one edge.
    """
    deg = pattern.degree_sequence()
    isolated = [v for v, d in enumerate(deg) if d == 0]
    if not isolated:
        return None
    keep = [v for v in range(pattern.n_vertices) if deg[v] > 0]
    relabel = {v: i for i, v in enumerate(keep)}
    core = SubgraphPattern(
        len(keep), tuple((relabel[u], relabel[v]) for u, v in pattern.edges)
    )
    return core, len(isolated)


def _distinct_relabellings(pattern: SubgraphPattern):
    """Distinct images of the pattern's edge set under vertex permutations."""
    h = pattern.n_vertices
    seen = set()
    out = []
    for perm in permutations(range(h)):
        mapped = tuple(
            sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in pattern.edges)
        )
        if mapped not in seen:
            seen.add(mapped)
            out.append(mapped)
    return out


def _check_generic_sizes(pattern: SubgraphPattern, graph: SimpleGraph) -> None:
    if pattern.n_vertices > MAX_GENERIC_PATTERN_VERTICES:
        raise UnsupportedSizeError(
            f"generic pattern counting capped at {MAX_GENERIC_PATTERN_VERTICES} pattern vertices"
        )
    if graph.n > MAX_GENERIC_GRAPH_VERTICES:
        raise UnsupportedSizeError(
            f"generic pattern counting capped at {MAX_GENERIC_GRAPH_VERTICES} graph vertices"
        )


def _generic_raw_count(pattern: SubgraphPattern, graph: SimpleGraph) -> int:
    _check_generic_sizes(pattern, graph)
    h = pattern.n_vertices
    if graph.n < h:
        return 0
    adj = graph.adjacency
    variants = _distinct_relabellings(pattern)
    total = 0
    for subset in combinations(range(graph.n), h):
        for edges in variants:
            if all(adj[subset[u], subset[v]] for u, v in edges):
                total += 1
    return total


# ---------------------------------------------------------------------------
# Centered counts


def centered_count(pattern: SubgraphPattern, graph: SimpleGraph, p: float) -> float:
    """S_n(H): sum over copies of H of the product of (A_ij - p)."""
    p = _check_p(p)
    key = pattern.canonical_form()
    n = graph.n
    m = graph.edge_count()
    if key == _KEY_P2:
        return m - math.comb(n, 2) * p
    if key == _KEY_P3:
        return _centered_two_path(graph, p)
    if key == _KEY_C3:
        return _centered_triangle(graph, p)
    if key == _KEY_H3:
        s_p2 = m - math.comb(n, 2) * p
        sq_sum = m * (1.0 - 2.0 * p) + math.comb(n, 2) * p * p
        return 0.5 * (s_p2 * s_p2 - sq_sum) - _centered_two_path(graph, p)
    if not pattern.edges:
        return float(math.comb(n, pattern.n_vertices))
    iso = _isolated_pattern_vertices(pattern)
    if iso:
        core, k_iso = iso
        if n < pattern.n_vertices:
            return 0.0
        spare = n - core.n_vertices
        return centered_count(core, graph, p) * math.comb(spare, k_iso)
    return _generic_centered_count(pattern, graph, p)


def _centered_two_path(graph: SimpleGraph, p: float) -> float:
    n = graph.n
    deg = graph.degrees().astype(np.float64)
    resid = deg - (n - 1) * p
    row_sq = deg * (1.0 - 2.0 * p) + (n - 1) * p * p
    return float(0.5 * (resid * resid - row_sq).sum())


def _centered_triangle(graph: SimpleGraph, p: float) -> float:
    a = graph.adjacency.astype(np.float64)
    n = graph.n
    m = graph.edge_count()
    tr3 = ((a @ a) * a).sum()
    deg = a.sum(axis=1)
    d2 = float((deg * deg).sum())
    # trace of the centered adjacency cubed, expanded around trace(A^3)
    return float(
        tr3
        - 3.0 * p * (d2 - 2.0 * m)
        + 6.0 * p * p * (n - 2) * m
        - p ** 3 * n * (n - 1) * (n - 2)
    ) / 6.0


def _generic_centered_count(pattern: SubgraphPattern, graph: SimpleGraph, p: float) -> float:
    _check_generic_sizes(pattern, graph)
    h = pattern.n_vertices
    if graph.n < h:
        return 0.0
    centered = graph.adjacency.astype(np.float64) - p
    np.fill_diagonal(centered, 0.0)
    variants = _distinct_relabellings(pattern)
    total = 0.0
    for subset in combinations(range(graph.n), h):
        for edges in variants:
            prod = 1.0
            for u, v in edges:
                prod *= centered[subset[u], subset[v]]
            total += prod
    return total


def centered_count_estimated(pattern: SubgraphPattern, graph: SimpleGraph) -> float:
    """S_n(H) centered at the plug-in edge density estimate."""
    p_hat = graph.mean_connectivity_hat()
    if pattern.canonical_form() == _KEY_P2:
        # m - C(n,2) * (m / C(n,2)) vanishes identically.
        return 0.0
    return centered_count(pattern, graph, p_hat)


# ---------------------------------------------------------------------------
# Degree variance


def degree_variance(graph: SimpleGraph) -> float:
    """Population variance of the degree sequence."""
    return float(np.var(graph.degrees().astype(np.float64)))


@dataclass(frozen=True)
class VnDecomposition:
    """Exact expansion of the degree variance in centered counts.

    V_n = a1 * S_n(P2) + a2 * S_n(P3) + a3 * S_n(H3) + baseline, where the
    baseline is the null mean of V_n at the centering probability.
    """

    s_p2: float
    s_p3: float
    s_h3: float
    a1: float
    a2: float
    a3: float
    baseline: float

    @property
    def total(self) -> float:
        return (
            self.a1 * self.s_p2 + self.a2 * self.s_p3 + self.a3 * self.s_h3 + self.baseline
        )


def vn_decomposition(graph: SimpleGraph, p: float) -> VnDecomposition:
    """Decompose the degree variance into centered subgraph counts."""
    p = _check_p(p)
    n = graph.n
    if n < 4:
        raise UnsupportedSizeError("decomposition needs at least 4 vertices")
    q = 1.0 - p
    return VnDecomposition(
        s_p2=centered_count(P2, graph, p),
        s_p3=centered_count(P3, graph, p),
        s_h3=centered_count(H3, graph, p),
        a1=2.0 * (n - 2) * (1.0 - 2.0 * p) / n ** 2,
        a2=2.0 * (n - 4) / n ** 2,
        a3=-8.0 / n ** 2,
        baseline=(n - 1) * (n - 2) * p * q / n,
    )


# ---------------------------------------------------------------------------
# Null moments


def sn_null_moments(
    pattern: SubgraphPattern, n: int, p: float, convention: str = "per-copy"
) -> MomentPair:
    """Mean and variance of S_n(H) under the homogeneous null.

    The per-copy convention scales the variance by the number of copies
    of H in the complete graph.  The aut-scaled alternative multiplies by
    the automorphism count squared; it is provided only so verification
    can demonstrate that it disagrees with exact enumeration.
    """
    p = _check_p(p)
    if pattern.has_isolated_vertices():
        raise InputError("null variance formula requires an isolate-free pattern")
    if n < pattern.n_vertices:
        raise InputError(
            f"need n >= {pattern.n_vertices} vertices for this pattern, got {n}"
        )
    copies = copies_count(pattern, n)
    scale = (p * (1.0 - p)) ** pattern.edge_count
    if convention == "per-copy":
        variance = copies * scale
    elif convention == "aut-scaled":
        aut = pattern.automorphism_count()
        variance = aut * math.perm(n, pattern.n_vertices) * scale
    else:
        raise InputError(f"unknown variance convention {convention!r}")
    return MomentPair(0.0, float(variance))


def vn_null_moments(n: int, p: float) -> MomentPair:
    """Mean and variance of the degree variance under the null."""
    p = _check_p(p)
    if n < 3:
        raise InputError("degree-variance moments need n >= 3")
    q = 1.0 - p
    mean = (n - 1) * (n - 2) * p * q / n
    variance = 2.0 * (n - 1) * (n - 2) ** 2 * p * q * (1.0 + (n - 6) * p * q) / n ** 3
    return MomentPair(float(mean), float(variance))


def tn_c3_null_moments(n: int, p: float) -> MomentPair:
    """Mean and variance of the raw triangle count under the null."""
    p = _check_p(p)
    if n < 3:
        raise InputError("triangle-count moments need n >= 3")
    q = 1.0 - p
    c3 = math.comb(n, 3)
    mean = c3 * p ** 3
    variance = (
        c3 * (p * q) ** 3
        + 3.0 * c3 * p ** 2 * (p * q) ** 2
        + math.comb(n, 2) * (n - 2) ** 2 * p ** 5 * q
    )
    return MomentPair(float(mean), float(variance))
