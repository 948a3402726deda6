"""Small subgraph patterns: automorphisms, copy counts, densities.

The built-in patterns cover everything the degree-variance theory needs:
single edge, 2-path, triangle, and the two-disjoint-edges graph, plus
the padded variants (triangle or 2-path with an extra isolated vertex)
that appear in induced-count decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .errors import InputError, UnsupportedSizeError

MAX_PATTERN_VERTICES = 8


def _normalize_edges(n: int, edges) -> tuple[tuple[int, int], ...]:
    out = []
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"pattern edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise InputError(f"pattern self-loop at vertex {u}")
        out.append((min(u, v), max(u, v)))
    if len(set(out)) != len(out):
        raise InputError("duplicate pattern edge")
    return tuple(sorted(out))


@dataclass(frozen=True)
class SubgraphPattern:
    """A labelled graph on vertices 0..n_vertices-1 used as a motif."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise InputError("pattern needs at least one vertex")
        object.__setattr__(self, "edges", _normalize_edges(self.n_vertices, self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def has_isolated_vertices(self) -> bool:
        return 0 in self.degree_sequence()

    def is_connected(self) -> bool:
        if self.n_vertices == 1:
            return True
        adj = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def max_density(self) -> float:
        """max over subgraphs with >= 1 edge of edges/vertices."""
        best = 0.0
        for size in range(2, self.n_vertices + 1):
            for subset in _vertex_subsets(self.n_vertices, size):
                m_sub = sum(1 for u, v in self.edges if u in subset and v in subset)
                if m_sub:
                    best = max(best, m_sub / size)
        return best

    def automorphism_count(self) -> int:
        return _aut_count(self.n_vertices, self.edges)

    def canonical_form(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        """Relabelling-invariant key for isomorphism dispatch."""
        return self.n_vertices, _canonical_edges(self.n_vertices, self.edges)

    def __repr__(self) -> str:
        label = self.name or f"{self.n_vertices}v{self.edge_count}e"
        return f"SubgraphPattern({label})"


def _vertex_subsets(n: int, size: int):
    from itertools import combinations

    for subset in combinations(range(n), size):
        yield set(subset)


@lru_cache(maxsize=None)
def _aut_count(n: int, edges: tuple[tuple[int, int], ...]) -> int:
    if n > MAX_PATTERN_VERTICES:
        raise UnsupportedSizeError(
            f"automorphism enumeration capped at {MAX_PATTERN_VERTICES} vertices"
        )
    edge_set = frozenset(edges)
    count = 0
    for perm in permutations(range(n)):
        mapped = frozenset(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges
        )
        if mapped == edge_set:
            count += 1
    return count


@lru_cache(maxsize=None)
def _canonical_edges(n: int, edges: tuple[tuple[int, int], ...]):
    if n > MAX_PATTERN_VERTICES:
        raise UnsupportedSizeError(
            f"canonical form enumeration capped at {MAX_PATTERN_VERTICES} vertices"
        )
    best = None
    for perm in permutations(range(n)):
        mapped = tuple(
            sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges)
        )
        if best is None or mapped < best:
            best = mapped
    return best


def automorphism_count(pattern: SubgraphPattern) -> int:
    return pattern.automorphism_count()


def copies_count(pattern: SubgraphPattern, n: int) -> int:
    """Number of copies of the pattern in the complete graph on n vertices.

    Equals the falling factorial (n)_{n_vertices} divided by the
    automorphism count; zero when n is too small to host the pattern.
    """
    h = pattern.n_vertices
    if n < h:
        return 0
    return math.perm(n, h) // pattern.automorphism_count()


# Built-in patterns.
P2 = SubgraphPattern(2, ((0, 1),), name="P2")
P3 = SubgraphPattern(3, ((0, 1), (1, 2)), name="P3")
C3 = SubgraphPattern(3, ((0, 1), (1, 2), (0, 2)), name="C3")
H3 = SubgraphPattern(4, ((0, 1), (2, 3)), name="H3")
# Padded variants on 4 vertices (one isolated vertex each).
D3 = SubgraphPattern(4, ((0, 1), (1, 2)), name="D3")
E3 = SubgraphPattern(4, ((0, 1), (1, 2), (0, 2)), name="E3")
