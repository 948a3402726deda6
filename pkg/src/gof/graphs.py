"""Simple undirected graphs and file I/O.

Graphs are stored as dense boolean adjacency matrices.  Vertices are
0-indexed internally; the edge-list file format is 1-indexed.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import GraphParseError, InputError, UnsupportedSizeError

MAX_DENSE_VERTICES = 4096

_HEADER_RE = re.compile(r"^n\s+(\d+)$")


class SimpleGraph:
    """An immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("_adj",)

    def __init__(self, adjacency: np.ndarray):
        adj = np.asarray(adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError("adjacency must be a square matrix")
        if adj.shape[0] < 1:
            raise InputError("graph needs at least one vertex")
        if adj.shape[0] > MAX_DENSE_VERTICES:
            raise UnsupportedSizeError(
                f"dense representation capped at {MAX_DENSE_VERTICES} vertices"
            )
        if adj.dtype != np.bool_:
            vals = np.unique(adj)
            if not np.isin(vals, (0, 1)).all():
                raise InputError("adjacency entries must be 0 or 1")
            adj = adj.astype(bool)
        else:
            adj = adj.copy()
        if adj.diagonal().any():
            raise InputError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise InputError("adjacency must be symmetric")
        adj.setflags(write=False)
        self._adj = adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        """Build from 0-indexed vertex pairs."""
        if n < 1:
            raise InputError("graph needs at least one vertex")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    @classmethod
    def from_packed(cls, n: int, packed: np.ndarray) -> "SimpleGraph":
        """Build from the upper-triangle edge indicators in row-major order."""
        packed = np.asarray(packed, dtype=bool)
        if packed.shape != (math.comb(n, 2),):
            raise InputError("packed edge vector has wrong length")
        adj = np.zeros((n, n), dtype=bool)
        iu = np.triu_indices(n, 1)
        adj[iu] = packed
        adj[iu[1], iu[0]] = packed
        return cls(adj)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only boolean adjacency matrix."""
        return self._adj

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1).astype(np.int64)

    def edge_count(self) -> int:
        return int(self._adj.sum()) // 2

    def mean_connectivity_hat(self) -> float:
        """Edge density estimate: edges divided by vertex pairs."""
        if self.n < 2:
            raise InputError("edge density needs at least two vertices")
        return self.edge_count() / math.comb(self.n, 2)

    def packed_upper(self) -> np.ndarray:
        """Upper-triangle edge indicators in row-major order."""
        return self._adj[np.triu_indices(self.n, 1)]

    def relabel(self, perm: Iterable[int]) -> "SimpleGraph":
        """Isomorphic copy with vertex i renamed to perm[i]."""
        perm = np.asarray(list(perm))
        if sorted(perm.tolist()) != list(range(self.n)):
            raise InputError("perm must be a permutation of 0..n-1")
        inv = np.argsort(perm)
        return SimpleGraph(self._adj[np.ix_(inv, inv)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._adj, other._adj)

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.edge_count()})"


def read_edge_list(path: str | Path) -> SimpleGraph:
    """Read the 1-indexed edge-list format.

    First non-blank line is ``n <vertices>``; every following non-blank
    line is an edge ``i j`` with 1 <= i < j <= n.  Lines starting with
    ``#`` are ignored.
    """
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if n is None:
                match = _HEADER_RE.match(line)
                if not match:
                    raise GraphParseError("expected header 'n <vertices>'", lineno)
                n = int(match.group(1))
                if n < 1:
                    raise GraphParseError("vertex count must be positive", lineno)
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(f"expected 'i j', got {line!r}", lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"non-integer edge entry in {line!r}", lineno)
            if not (1 <= i < j <= n):
                raise GraphParseError(
                    f"edge ({i}, {j}) must satisfy 1 <= i < j <= {n}", lineno
                )
            if (i, j) in seen:
                raise GraphParseError(f"duplicate edge ({i}, {j})", lineno)
            seen.add((i, j))
            edges.append((i - 1, j - 1))
    if n is None:
        raise GraphParseError("empty file: missing 'n <vertices>' header")
    return SimpleGraph.from_edges(n, edges)


def write_edge_list(graph: SimpleGraph, path: str | Path) -> None:
    """Write the format read by :func:`read_edge_list`."""
    iu, ju = np.nonzero(np.triu(graph.adjacency, 1))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"n {graph.n}\n")
        for u, v in zip(iu.tolist(), ju.tolist()):
            fh.write(f"{u + 1} {v + 1}\n")


def read_matrix_csv(path: str | Path) -> SimpleGraph:
    """Read a square 0/1 adjacency matrix from comma-separated rows."""
    rows: list[list[int]] = []
    row_lines: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = [cell.strip() for cell in line.split(",")]
            try:
                row = [int(cell) for cell in cells]
            except ValueError:
                raise GraphParseError(f"non-integer matrix entry in {line!r}", lineno)
            if any(v not in (0, 1) for v in row):
                raise GraphParseError("matrix entries must be 0 or 1", lineno)
            rows.append(row)
            row_lines.append(lineno)
    if not rows:
        raise GraphParseError("empty file: no matrix rows")
    n = len(rows)
    for row, lineno in zip(rows, row_lines):
        if len(row) != n:
            raise GraphParseError(f"expected {n} entries per row, got {len(row)}", lineno)
    adj = np.array(rows, dtype=np.int8)
    try:
        return SimpleGraph(adj)
    except InputError as exc:
        raise GraphParseError(str(exc)) from exc


def load_graph(path: str | Path) -> SimpleGraph:
    """Load either supported format, sniffing by the first content line."""
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if _HEADER_RE.match(line):
                return read_edge_list(path)
            return read_matrix_csv(path)
    raise GraphParseError("empty file")
