"""Scalar and batched evaluation of the four test functionals.

Functionals are addressed by short ids:

* ``vn``  degree variance
* ``sc3`` centered triangle count at the plug-in density
* ``sp3`` centered 2-path count at the plug-in density
* ``tc3`` raw triangle count

The batched route evaluates many graphs stored as packed upper-triangle
edge indicators at once; the bootstrap and the simulation harness both
run on it.  It must agree with the scalar route to float precision, and
the test suite pins that equivalence.
"""

from __future__ import annotations

import math

import numpy as np

from . import counts
from .errors import InputError
from .graphs import SimpleGraph
from .patterns import C3, P3

FUNCTIONALS = ("vn", "sc3", "sp3", "tc3")

FUNCTIONAL_LABELS = {
    "vn": "degree variance",
    "sc3": "centered triangle count",
    "sp3": "centered 2-path count",
    "tc3": "raw triangle count",
}

# Smallest n for which the corresponding asymptotic test is defined.
FUNCTIONAL_MIN_N = {"vn": 7, "sc3": 3, "sp3": 3, "tc3": 3}

_DEFAULT_CHUNK_FLOATS = 4 << 20  # ~32 MB of float64 scratch per chunk


def check_functional(functional: str) -> str:
    if functional not in FUNCTIONALS:
        raise InputError(
            f"unknown functional {functional!r}; expected one of {', '.join(FUNCTIONALS)}"
        )
    return functional


def observed_statistic(graph: SimpleGraph, functional: str) -> float:
    """Evaluate one functional on one graph via the closed forms."""
    check_functional(functional)
    if functional == "vn":
        return counts.degree_variance(graph)
    if functional == "sc3":
        return counts.centered_count_estimated(C3, graph)
    if functional == "sp3":
        return counts.centered_count_estimated(P3, graph)
    return float(counts.raw_count(C3, graph))


def batch_statistics(
    packed: np.ndarray, n: int, functionals: tuple[str, ...] | list[str]
) -> dict[str, np.ndarray]:
    """Evaluate functionals on a stack of packed graphs.

    ``packed`` has shape (B, C(n,2)) with boolean upper-triangle edge
    indicators in row-major order.  Returns one float array per
    requested functional plus the per-graph density estimate under
    ``"p_hat"``.
    """
    for functional in functionals:
        check_functional(functional)
    packed = np.asarray(packed, dtype=bool)
    n_pairs = math.comb(n, 2)
    if packed.ndim != 2 or packed.shape[1] != n_pairs:
        raise InputError(f"packed batch must have shape (B, {n_pairs})")
    n_graphs = packed.shape[0]
    m = packed.sum(axis=1).astype(np.float64)
    p_hat = m / n_pairs
    out: dict[str, np.ndarray] = {"p_hat": p_hat}
    need_triangles = "sc3" in functionals or "tc3" in functionals

    if need_triangles:
        deg = np.empty((n_graphs, n), dtype=np.float64)
        tr3 = np.empty(n_graphs, dtype=np.float64)
        iu = np.triu_indices(n, 1)
        chunk = max(1, _DEFAULT_CHUNK_FLOATS // (n * n))
        for start in range(0, n_graphs, chunk):
            stop = min(start + chunk, n_graphs)
            adj = np.zeros((stop - start, n, n), dtype=np.float64)
            adj[:, iu[0], iu[1]] = packed[start:stop]
            adj[:, iu[1], iu[0]] = packed[start:stop]
            deg[start:stop] = adj.sum(axis=2)
            tr3[start:stop] = (np.matmul(adj, adj) * adj).sum(axis=(1, 2))
    else:
        # Degree-only functionals: degrees via the pair-vertex incidence.
        iu = np.triu_indices(n, 1)
        incidence = np.zeros((n_pairs, n), dtype=np.float64)
        incidence[np.arange(n_pairs), iu[0]] = 1.0
        incidence[np.arange(n_pairs), iu[1]] = 1.0
        deg = packed.astype(np.float64) @ incidence
        tr3 = None

    for functional in functionals:
        if functional == "vn":
            out[functional] = deg.var(axis=1)
        elif functional == "sp3":
            resid = deg - (n - 1) * p_hat[:, None]
            row_sq = deg * (1.0 - 2.0 * p_hat[:, None]) + (n - 1) * p_hat[:, None] ** 2
            out[functional] = 0.5 * (resid * resid - row_sq).sum(axis=1)
        elif functional == "tc3":
            out[functional] = np.rint(tr3 / 6.0)
        elif functional == "sc3":
            d2 = (deg * deg).sum(axis=1)
            out[functional] = (
                tr3
                - 3.0 * p_hat * (d2 - 2.0 * m)
                + 6.0 * p_hat ** 2 * (n - 2) * m
                - p_hat ** 3 * n * (n - 1) * (n - 2)
            ) / 6.0
    return out
