"""Goodness-of-fit tests for the homogeneous model.

Three asymptotic tests (degree variance, centered counts, raw triangle
count) standardize their statistic with plug-in null moments and compare
against normal critical values.  The parametric bootstrap resamples
homogeneous graphs at the estimated density and offers two calibrations:
plain percentile intervals, and symmetrized intervals around the
analytic null center (absolute deviations, in the style of Hall).
All tests are two-sided at level alpha.
"""

from __future__ import annotations

import json
import math
import secrets
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import NamedTuple

import numpy as np

from . import counts, evaluate
from .errors import DegenerateGraphError, InputError
from .graphs import SimpleGraph
from .patterns import C3, P2, P3, SubgraphPattern, copies_count
from .rng import TAG_BOOT, derive, make_generator

MODE_ASYMPTOTIC = "asym"
MODE_BOOT_PERCENTILE = "boot-pct"
MODE_BOOT_HALL = "boot-hall"
MODES = (MODE_ASYMPTOTIC, MODE_BOOT_PERCENTILE, MODE_BOOT_HALL)


@dataclass(frozen=True)
class TestSpec:
    """What to run: functional id, calibration mode, level, bootstrap size."""

    functional: str
    mode: str
    alpha: float = 0.05
    B: int = 500
    seed: int | None = None

    def __post_init__(self):
        evaluate.check_functional(self.functional)
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.B < 1:
            raise InputError("bootstrap size B must be positive")


@dataclass
class TestReport:
    """Outcome of one test on one graph.

    ``statistic`` is always on the raw scale.  Asymptotic tests also
    report the standardized value and critical bounds on the
    standardized scale; bootstrap tests report raw-scale bounds and no
    standardized value.  In both cases the decision rule is: reject
    exactly when the compared value falls outside [critical_low,
    critical_high].
    """

    functional: str
    mode: str
    n: int
    p_hat: float
    statistic: float
    standardized: float | None
    critical_low: float
    critical_high: float
    reject: bool
    alpha: float
    B: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "mode": self.mode,
            "n": self.n,
            "p_hat": self.p_hat,
            "statistic": self.statistic,
            "standardized": self.standardized,
            "critical_low": self.critical_low,
            "critical_high": self.critical_high,
            "reject": self.reject,
            "alpha": self.alpha,
            "B": self.B,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def density_estimate_checked(graph: SimpleGraph) -> float:
    """Plug-in density; refuses empty and complete graphs."""
    p_hat = graph.mean_connectivity_hat()
    if p_hat <= 0.0 or p_hat >= 1.0:
        raise DegenerateGraphError(
            f"observed graph has density {p_hat:g}; tests need 0 < p_hat < 1"
        )
    return p_hat


def _z_crit(alpha: float) -> float:
    return NormalDist().inv_cdf(1.0 - alpha / 2.0)


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    return float(alpha)


# ---------------------------------------------------------------------------
# Asymptotic tests


def standardized_statistic(functional: str, x: float, n: int, p_hat: float) -> float:
    """Standardize a raw functional value with its plug-in null moments.

    This is the single source of the asymptotic pivots; the individual
    test functions and the simulation harness both go through it.
    """
    evaluate.check_functional(functional)
    q_hat = 1.0 - p_hat
    if functional == "vn":
        mean, var = counts.vn_null_moments(n, p_hat)
        return (x - mean) / math.sqrt(var)
    if functional == "sc3":
        scale = copies_count(C3, n) * (p_hat * q_hat) ** 3
        return x / math.sqrt(scale)
    if functional == "sp3":
        scale = copies_count(P3, n) * (p_hat * q_hat) ** 2
        return x / math.sqrt(scale)
    c3 = math.comb(n, 3)
    var = c3 * (p_hat * q_hat) ** 3 + 3.0 * c3 * p_hat ** 4 * q_hat ** 2
    return (x - c3 * p_hat ** 3) / math.sqrt(var)


def test_degree_variance_asymptotic(graph: SimpleGraph, alpha: float = 0.05) -> TestReport:
    """Two-sided normal test of the degree variance."""
    alpha = _check_alpha(alpha)
    if graph.n < 7:
        raise InputError("degree-variance test needs n >= 7")
    p_hat = density_estimate_checked(graph)
    stat = counts.degree_variance(graph)
    z = standardized_statistic("vn", stat, graph.n, p_hat)
    crit = _z_crit(alpha)
    return TestReport(
        functional="vn",
        mode=MODE_ASYMPTOTIC,
        n=graph.n,
        p_hat=p_hat,
        statistic=stat,
        standardized=z,
        critical_low=-crit,
        critical_high=crit,
        reject=abs(z) > crit,
        alpha=alpha,
    )


def test_centered_count_asymptotic(
    graph: SimpleGraph, pattern: SubgraphPattern, alpha: float = 0.05
) -> TestReport:
    """Two-sided normal test of a centered count at the plug-in density."""
    alpha = _check_alpha(alpha)
    if not pattern.is_connected() or pattern.n_vertices < 2:
        raise InputError("centered-count test needs a connected pattern")
    if pattern.canonical_form() == P2.canonical_form():
        raise InputError(
            "single-edge pattern is centered away identically by the plug-in density"
        )
    if graph.n < pattern.n_vertices:
        raise InputError(
            f"graph too small for this pattern: n={graph.n} < {pattern.n_vertices}"
        )
    p_hat = density_estimate_checked(graph)
    stat = counts.centered_count_estimated(pattern, graph)
    scale = copies_count(pattern, graph.n) * (p_hat * (1.0 - p_hat)) ** pattern.edge_count
    z = stat / math.sqrt(scale)
    crit = _z_crit(alpha)
    key = pattern.canonical_form()
    if key == C3.canonical_form():
        name = "sc3"
    elif key == P3.canonical_form():
        name = "sp3"
    else:
        name = f"s[{pattern.name or 'pattern'}]"
    return TestReport(
        functional=name,
        mode=MODE_ASYMPTOTIC,
        n=graph.n,
        p_hat=p_hat,
        statistic=stat,
        standardized=z,
        critical_low=-crit,
        critical_high=crit,
        reject=abs(z) > crit,
        alpha=alpha,
    )


def test_raw_triangles_asymptotic(graph: SimpleGraph, alpha: float = 0.05) -> TestReport:
    """Two-sided normal test of the raw triangle count.

    The centering is C(n,3) p_hat^3; the variance estimate keeps only the
    directions that survive plug-in centering (the single-edge direction
    cancels exactly).
    """
    alpha = _check_alpha(alpha)
    if graph.n < 3:
        raise InputError("triangle test needs n >= 3")
    p_hat = density_estimate_checked(graph)
    stat = float(counts.raw_count(C3, graph))
    z = standardized_statistic("tc3", stat, graph.n, p_hat)
    crit = _z_crit(alpha)
    return TestReport(
        functional="tc3",
        mode=MODE_ASYMPTOTIC,
        n=graph.n,
        p_hat=p_hat,
        statistic=stat,
        standardized=z,
        critical_low=-crit,
        critical_high=crit,
        reject=abs(z) > crit,
        alpha=alpha,
    )


_ASYMPTOTIC_TESTS = {
    "vn": test_degree_variance_asymptotic,
    "sc3": lambda g, alpha: test_centered_count_asymptotic(g, C3, alpha),
    "sp3": lambda g, alpha: test_centered_count_asymptotic(g, P3, alpha),
    "tc3": test_raw_triangles_asymptotic,
}


def run_asymptotic(graph: SimpleGraph, functional: str, alpha: float = 0.05) -> TestReport:
    """Dispatch an asymptotic test by functional id."""
    evaluate.check_functional(functional)
    return _ASYMPTOTIC_TESTS[functional](graph, alpha)


# ---------------------------------------------------------------------------
# Parametric bootstrap


def empirical_quantile(sample: np.ndarray, q: float) -> float:
    """Order-statistic quantile: the ceil(q*B)-th smallest value.

    No interpolation; a tiny slack keeps q*B from rounding up past an
    exact integer under floating point (e.g. 0.95 * 500).
    """
    sample = np.asarray(sample, dtype=np.float64)
    if sample.ndim != 1 or sample.size == 0:
        raise InputError("quantile needs a nonempty 1-d sample")
    if not 0.0 <= q <= 1.0:
        raise InputError(f"quantile level must lie in [0, 1], got {q}")
    size = sample.size
    idx = math.ceil(q * size - 1e-9)
    idx = min(max(idx, 1), size)
    return float(np.sort(sample)[idx - 1])


class BootstrapSample(NamedTuple):
    """Null resamples of one functional plus its analytic null center."""

    values: np.ndarray
    null_center: float
    p_hat: float
    seed: int


def _null_center(functional: str, n: int, p_hat: float) -> float:
    if functional == "vn":
        return counts.vn_null_moments(n, p_hat).mean
    if functional == "tc3":
        return math.comb(n, 3) * p_hat ** 3
    return 0.0


def bootstrap_null_samples(
    graph: SimpleGraph, functionals: tuple[str, ...] | list[str], B: int, seed: int
) -> dict[str, BootstrapSample]:
    """Draw B homogeneous graphs at the plug-in density, evaluate functionals.

    All functionals are evaluated on the same resampled graphs, so
    requesting several at once costs one set of resamples and keeps
    their decisions comparable replicate by replicate.
    """
    if B < 1:
        raise InputError("bootstrap size B must be positive")
    p_hat = density_estimate_checked(graph)
    n = graph.n
    rng = make_generator(derive(seed, TAG_BOOT))
    packed = rng.random((B, math.comb(n, 2))) < p_hat
    stats = evaluate.batch_statistics(packed, n, tuple(functionals))
    return {
        f: BootstrapSample(stats[f], _null_center(f, n, p_hat), p_hat, seed)
        for f in functionals
    }


def bootstrap_null_sample(
    graph: SimpleGraph, functional: str, B: int, seed: int
) -> BootstrapSample:
    evaluate.check_functional(functional)
    return bootstrap_null_samples(graph, (functional,), B, seed)[functional]


def percentile_decision(
    x: float, values: np.ndarray, alpha: float
) -> tuple[bool, float, float]:
    """Two-sided percentile interval; reject outside it."""
    low = empirical_quantile(values, alpha / 2.0)
    high = empirical_quantile(values, 1.0 - alpha / 2.0)
    return (x < low or x > high), low, high


def hall_decision(
    x: float, values: np.ndarray, center: float, alpha: float
) -> tuple[bool, float, float]:
    """Symmetrized interval around the analytic null center."""
    radius = empirical_quantile(np.abs(values - center), 1.0 - alpha)
    return (abs(x - center) > radius), center - radius, center + radius


def test_bootstrap(graph: SimpleGraph, spec: TestSpec) -> TestReport:
    """Run one bootstrap-calibrated test described by a TestSpec."""
    if spec.mode not in (MODE_BOOT_PERCENTILE, MODE_BOOT_HALL):
        raise InputError(f"test_bootstrap needs a bootstrap mode, got {spec.mode!r}")
    n = graph.n
    if n < evaluate.FUNCTIONAL_MIN_N[spec.functional]:
        raise InputError(
            f"functional {spec.functional} needs n >= "
            f"{evaluate.FUNCTIONAL_MIN_N[spec.functional]}"
        )
    seed = spec.seed if spec.seed is not None else secrets.randbits(63)
    x = evaluate.observed_statistic(graph, spec.functional)
    boot = bootstrap_null_sample(graph, spec.functional, spec.B, seed)
    if spec.mode == MODE_BOOT_PERCENTILE:
        reject, low, high = percentile_decision(x, boot.values, spec.alpha)
    else:
        reject, low, high = hall_decision(x, boot.values, boot.null_center, spec.alpha)
    return TestReport(
        functional=spec.functional,
        mode=spec.mode,
        n=n,
        p_hat=boot.p_hat,
        statistic=x,
        standardized=None,
        critical_low=low,
        critical_high=high,
        reject=reject,
        alpha=spec.alpha,
        B=spec.B,
        seed=seed,
    )


def run_test(graph: SimpleGraph, spec: TestSpec) -> TestReport:
    """Run any test described by a TestSpec (asymptotic or bootstrap)."""
    if spec.mode == MODE_ASYMPTOTIC:
        if graph.n < evaluate.FUNCTIONAL_MIN_N[spec.functional]:
            raise InputError(
                f"functional {spec.functional} needs n >= "
                f"{evaluate.FUNCTIONAL_MIN_N[spec.functional]}"
            )
        return run_asymptotic(graph, spec.functional, spec.alpha)
    return test_bootstrap(graph, spec)
