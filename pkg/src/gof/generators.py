"""Probability-matrix builders and graph samplers.

Three heterogeneous families are provided, each parameterized by a mean
connectivity and one heterogeneity knob:

* two balanced blocks with logistic link weights +-1/2 and strength
  lambda^2,
* three blocks of random sizes (each at least 2, uniform over such
  compositions) with weights (-1/2, 0, 1/4),
* a latent-position model where the link decreases in the coordinatewise
  distances between standard normal covariates, with strength sigma^2.

Every builder calibrates the link intercept so the average edge
probability over vertex pairs equals the requested mean exactly (up to
the bisection tolerance).  With the heterogeneity knob at zero the
matrix is exactly constant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit, logit

from .errors import CalibrationError, InputError
from .graphs import SimpleGraph
from .rng import make_generator

FAMILIES = ("er", "sbm2", "sbm3", "covariate")

DENSITY_RULES = ("log-n-over-n", "inv-sqrt-n", "log-n-over-sqrt-n")

CALIBRATION_TOL = 1e-10
CALIBRATION_MAX_ITER = 200
_CALIBRATION_BRACKET = 50.0


def density_rule_value(rule: str, n: int) -> float:
    """Resolve a named density rule (or a numeric literal) at a given n."""
    if rule == "log-n-over-n":
        return math.log(n) / n
    if rule == "inv-sqrt-n":
        return 1.0 / math.sqrt(n)
    if rule == "log-n-over-sqrt-n":
        return math.log(n) / math.sqrt(n)
    try:
        value = float(rule)
    except ValueError:
        raise InputError(
            f"unknown density rule {rule!r}; expected one of {DENSITY_RULES} or a number"
        )
    return value


class ProbabilityMatrix:
    """Symmetric matrix of edge probabilities with zero diagonal."""

    __slots__ = ("_mat",)

    def __init__(self, matrix: np.ndarray):
        mat = np.array(matrix, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError("probability matrix must be square")
        if mat.shape[0] < 1:
            raise InputError("probability matrix needs at least one vertex")
        if not np.array_equal(mat, mat.T):
            raise InputError("probability matrix must be symmetric")
        off = ~np.eye(mat.shape[0], dtype=bool)
        if ((mat[off] < 0.0) | (mat[off] > 1.0)).any():
            raise InputError("edge probabilities must lie in [0, 1]")
        np.fill_diagonal(mat, 0.0)
        mat.setflags(write=False)
        self._mat = mat

    @property
    def n(self) -> int:
        return self._mat.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    def upper_values(self) -> np.ndarray:
        """Off-diagonal probabilities in row-major upper-triangle order."""
        return self._mat[np.triu_indices(self.n, 1)]

    def mean_connectivity(self) -> float:
        if self.n < 2:
            raise InputError("mean connectivity needs at least two vertices")
        return float(self.upper_values().mean())

    def __repr__(self) -> str:
        return f"ProbabilityMatrix(n={self.n}, mean={self.mean_connectivity():.4g})"


def calibrate_offset(terms: np.ndarray, p_mean: float) -> float:
    """Find a with mean(expit(a + terms)) == p_mean by bisection.

    ``terms`` are the pairwise heterogeneity contributions on the link
    scale.  When they are all equal the answer is available in closed
    form; otherwise the mean is strictly increasing in a, so bisection
    on a fixed bracket converges.
    """
    terms = np.asarray(terms, dtype=np.float64).ravel()
    if terms.size == 0:
        raise InputError("calibration needs at least one pair term")
    if not 0.0 < p_mean < 1.0:
        raise InputError(f"mean connectivity must lie in (0, 1), got {p_mean}")
    if np.all(terms == terms[0]):
        return float(logit(p_mean) - terms[0])

    def residual(a: float) -> float:
        return float(expit(a + terms).mean() - p_mean)

    lo, hi = -_CALIBRATION_BRACKET, _CALIBRATION_BRACKET
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        raise CalibrationError(
            f"target mean {p_mean} not bracketed by offsets [{lo}, {hi}]"
        )
    for _ in range(CALIBRATION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = residual(mid)
        if abs(f_mid) <= CALIBRATION_TOL:
            return mid
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
    raise CalibrationError(
        f"offset bisection did not reach tolerance {CALIBRATION_TOL} "
        f"within {CALIBRATION_MAX_ITER} iterations"
    )


def _matrix_from_terms(n: int, p_mean: float, terms_upper: np.ndarray) -> ProbabilityMatrix:
    offset = calibrate_offset(terms_upper, p_mean)
    probs = expit(offset + terms_upper)
    mat = np.zeros((n, n), dtype=np.float64)
    iu = np.triu_indices(n, 1)
    mat[iu] = probs
    mat[iu[1], iu[0]] = probs
    return ProbabilityMatrix(mat)


def _constant_matrix(n: int, p_mean: float) -> ProbabilityMatrix:
    mat = np.full((n, n), p_mean, dtype=np.float64)
    np.fill_diagonal(mat, 0.0)
    return ProbabilityMatrix(mat)


def _check_common(n: int, p_mean: float, het: float, knob: str) -> None:
    if not 0.0 < p_mean < 1.0:
        raise InputError(f"mean connectivity must lie in (0, 1), got {p_mean}")
    if het < 0.0:
        raise InputError(f"{knob} must be nonnegative, got {het}")


def build_sbm2_probs(n: int, p_mean: float, lam: float) -> ProbabilityMatrix:
    """Balanced two-block model with gap controlled by lambda."""
    _check_common(n, p_mean, lam, "lambda")
    if n < 4 or n % 2:
        raise InputError("two-block model needs an even n >= 4")
    if lam == 0.0:
        return _constant_matrix(n, p_mean)
    weights = np.where(np.arange(n) < n // 2, -0.5, 0.5)
    iu = np.triu_indices(n, 1)
    terms = lam * lam * weights[iu[0]] * weights[iu[1]]
    return _matrix_from_terms(n, p_mean, terms)


def sample_block_sizes(n: int, rng: np.random.Generator) -> tuple[int, int, int]:
    """Uniform composition of n into three parts, each at least 2."""
    if n < 6:
        raise InputError("three blocks of size >= 2 need n >= 6")
    slack = n - 6
    bars = np.sort(rng.choice(slack + 2, size=2, replace=False))
    b1 = int(bars[0]) + 2
    b2 = int(bars[1] - bars[0] - 1) + 2
    b3 = int(slack + 1 - bars[1]) + 2
    return b1, b2, b3


def build_sbm3_probs(n: int, p_mean: float, lam: float, seed: int) -> ProbabilityMatrix:
    """Three blocks of random sizes with weights (-1/2, 0, 1/4)."""
    _check_common(n, p_mean, lam, "lambda")
    if n < 6:
        raise InputError("three-block model needs n >= 6")
    rng = make_generator(seed)
    b1, b2, b3 = sample_block_sizes(n, rng)
    if lam == 0.0:
        return _constant_matrix(n, p_mean)
    weights = np.concatenate(
        [np.full(b1, -0.5), np.zeros(b2), np.full(b3, 0.25)]
    )
    iu = np.triu_indices(n, 1)
    terms = lam * lam * weights[iu[0]] * weights[iu[1]]
    return _matrix_from_terms(n, p_mean, terms)


def build_covariate_probs(n: int, p_mean: float, sigma2: float, seed: int) -> ProbabilityMatrix:
    """Latent 2-d normal covariates; link decreases in their distances."""
    _check_common(n, p_mean, sigma2, "sigma2")
    if n < 2:
        raise InputError("covariate model needs n >= 2")
    rng = make_generator(seed)
    x = rng.standard_normal((n, 2))
    if sigma2 == 0.0:
        return _constant_matrix(n, p_mean)
    iu = np.triu_indices(n, 1)
    gaps = np.abs(x[iu[0]] - x[iu[1]])
    terms = -sigma2 * (gaps[:, 0] + gaps[:, 1])
    return _matrix_from_terms(n, p_mean, terms)


def sample_er(n: int, p: float, seed: int) -> SimpleGraph:
    """One homogeneous graph at density p."""
    if n < 1:
        raise InputError("graph needs at least one vertex")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    rng = make_generator(seed)
    packed = rng.random(math.comb(n, 2)) < p
    return SimpleGraph.from_packed(n, packed)


def sample_her(probs: ProbabilityMatrix, seed: int) -> SimpleGraph:
    """One graph with independent edges at pairwise probabilities."""
    rng = make_generator(seed)
    upper = probs.upper_values()
    packed = rng.random(upper.size) < upper
    return SimpleGraph.from_packed(probs.n, packed)


@dataclass
class ScenarioConfig:
    """One simulation scenario: family, size, density rule, heterogeneity.

    ``p_mean_rule`` is the label used in result files ("fixed" when a
    numeric density was given directly); ``p_mean`` is its resolved
    value at this n.  ``seed`` is an optional scenario-level seed for
    standalone matrix construction; the harness derives per-replicate
    seeds itself and ignores it.
    """

    family: str
    n: int
    p_mean: float
    heterogeneity: float = 0.0
    seed: int | None = None
    p_mean_rule: str = "fixed"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(
                f"unknown family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.n < 1:
            raise InputError("scenario needs n >= 1")
        if not 0.0 < self.p_mean < 1.0:
            raise InputError(f"mean connectivity must lie in (0, 1), got {self.p_mean}")
        if self.heterogeneity < 0.0:
            raise InputError("heterogeneity must be nonnegative")
        if self.family == "er" and self.heterogeneity != 0.0:
            raise InputError("homogeneous family takes heterogeneity 0")

    @classmethod
    def from_rule(
        cls,
        family: str,
        n: int,
        rule: str,
        heterogeneity: float = 0.0,
        seed: int | None = None,
    ) -> "ScenarioConfig":
        value = density_rule_value(rule, n)
        label = rule if rule in DENSITY_RULES else "fixed"
        return cls(
            family=family,
            n=n,
            p_mean=value,
            heterogeneity=heterogeneity,
            seed=seed,
            p_mean_rule=label,
        )

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "p_mean": self.p_mean,
            "heterogeneity": self.heterogeneity,
            "seed": self.seed,
            "p_mean_rule": self.p_mean_rule,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        known = {"family", "n", "p_mean", "heterogeneity", "seed", "p_mean_rule"}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown scenario fields: {sorted(unknown)}")
        if "family" not in data or "n" not in data or "p_mean" not in data:
            raise InputError("scenario needs at least family, n, and p_mean")
        n = int(data["n"])
        p_raw = data["p_mean"]
        if isinstance(p_raw, str):
            p_mean = density_rule_value(p_raw, n)
            rule = p_raw if p_raw in DENSITY_RULES else "fixed"
        else:
            p_mean = float(p_raw)
            rule = str(data.get("p_mean_rule", "fixed"))
        seed = data.get("seed")
        return cls(
            family=str(data["family"]),
            n=n,
            p_mean=p_mean,
            heterogeneity=float(data.get("heterogeneity", 0.0)),
            seed=None if seed is None else int(seed),
            p_mean_rule=rule,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ScenarioConfig":
        """Load from JSON or from key=value lines."""
        text = Path(path).read_text(encoding="utf-8").strip()
        if text.startswith("{"):
            return cls.from_dict(json.loads(text))
        data: dict = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputError(f"line {lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            data[key.strip()] = value.strip()
        if "n" in data:
            data["n"] = int(data["n"])
        if "heterogeneity" in data:
            data["heterogeneity"] = float(data["heterogeneity"])
        if "seed" in data:
            data["seed"] = int(data["seed"])
        return cls.from_dict(data)


def build_probability_matrix(config: ScenarioConfig, seed: int | None = None) -> ProbabilityMatrix:
    """Materialize the probability matrix for a scenario.

    sbm3 and covariate scenarios draw their structure (block sizes,
    covariates) from the given seed, falling back to the scenario's own.
    """
    if config.family == "er":
        return _constant_matrix(config.n, config.p_mean)
    if config.family == "sbm2":
        return build_sbm2_probs(config.n, config.p_mean, config.heterogeneity)
    use_seed = seed if seed is not None else config.seed
    if use_seed is None:
        raise InputError(f"family {config.family!r} needs a seed for its structure")
    if config.family == "sbm3":
        return build_sbm3_probs(config.n, config.p_mean, config.heterogeneity, use_seed)
    return build_covariate_probs(config.n, config.p_mean, config.heterogeneity, use_seed)
