"""Goodness-of-fit tests for homogeneous random graphs.

Test whether a single observed graph is compatible with edges appearing
independently at one common probability, against heterogeneous
alternatives, using degree-variance and subgraph-count functionals with
asymptotic or parametric-bootstrap calibration.

Submodules are imported lazily so the command line can configure thread
pools before any numerics load.
"""

__version__ = "0.1.0"

_SUBMODULES = (
    "cli",
    "counts",
    "errors",
    "evaluate",
    "generators",
    "goftests",
    "graphs",
    "harness",
    "oracle",
    "patterns",
    "power",
    "rng",
)


def __getattr__(name):
    if name in _SUBMODULES:
        import importlib

        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
