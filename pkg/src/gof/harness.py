"""Simulation harness: power curves over scenario grids with CSV output.

One scenario = (family, n, density rule, heterogeneity).  Each
replicate derives its own 64-bit seed from (master seed, scenario id,
replicate index), so adding scenarios or reordering the grid never
perturbs existing cells, and results are reproducible byte for byte.
Replicates that cannot be tested (degenerate density estimate) are
counted in a separate failures column and excluded from the power
denominator rather than silently counted as non-rejections.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from statistics import NormalDist
from typing import Callable, Sequence

import numpy as np

from . import evaluate
from .errors import InputError
from .generators import (
    ScenarioConfig,
    build_covariate_probs,
    build_sbm2_probs,
    build_sbm3_probs,
)
from .goftests import (
    MODE_ASYMPTOTIC,
    MODE_BOOT_HALL,
    MODE_BOOT_PERCENTILE,
    MODES,
    TestSpec,
    _z_crit,
    bootstrap_null_samples,
    hall_decision,
    percentile_decision,
    standardized_statistic,
)
from .graphs import SimpleGraph
from .rng import TAG_GRAPH, TAG_MATRIX, derive, make_generator

CSV_COLUMNS = (
    "scenario",
    "family",
    "n",
    "p_mean_rule",
    "p_mean_value",
    "heterogeneity",
    "functional",
    "mode",
    "alpha",
    "B",
    "R",
    "rejections",
    "failures",
    "power",
    "ci_low",
    "ci_high",
    "master_seed",
)

PAPER_N_GRID = (16, 32, 64, 128)
PAPER_RULES = ("log-n-over-n", "inv-sqrt-n", "log-n-over-sqrt-n")
PAPER_LAMBDA_GRID = tuple(0.5 * k for k in range(9))
PAPER_SIGMA2_GRID = (0.0, 0.5, 1.0, 1.5, 2.0)
PAPER_FUNCTIONALS = ("vn", "sc3", "sp3")
PAPER_R = 1000
PAPER_B = 500
PAPER_ALPHA = 0.05


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    if not 0 <= successes <= trials:
        raise InputError("successes must lie in [0, trials]")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def scenario_id(config: ScenarioConfig) -> str:
    """Stable scenario label used in seeds and result files."""
    if config.p_mean_rule != "fixed":
        p_token = config.p_mean_rule
    else:
        p_token = f"{config.p_mean:g}"
    return f"{config.family}:n={config.n}:p={p_token}:h={config.heterogeneity:g}"


@dataclass
class PowerCurvePoint:
    """One (scenario, functional, mode) cell of a power study."""

    scenario: str
    family: str
    n: int
    p_mean_rule: str
    p_mean_value: float
    heterogeneity: float
    functional: str
    mode: str
    alpha: float
    B: int
    R: int
    rejections: int
    failures: int
    master_seed: int

    @property
    def effective_r(self) -> int:
        return self.R - self.failures

    @property
    def power(self) -> float:
        if self.effective_r <= 0:
            return math.nan
        return self.rejections / self.effective_r

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.rejections, self.effective_r)

    def to_row(self) -> list[str]:
        lo, hi = self.ci
        return [
            self.scenario,
            self.family,
            str(self.n),
            self.p_mean_rule,
            f"{self.p_mean_value:.10g}",
            f"{self.heterogeneity:g}",
            self.functional,
            self.mode,
            f"{self.alpha:g}",
            str(self.B),
            str(self.R),
            str(self.rejections),
            str(self.failures),
            "nan" if math.isnan(self.power) else f"{self.power:.6f}",
            f"{lo:.6f}",
            f"{hi:.6f}",
            str(self.master_seed),
        ]


def _replicate_graph(config: ScenarioConfig, rep_seed: int) -> SimpleGraph:
    """Sample one replicate graph; heterogeneous structure is redrawn per rep."""
    n = config.n
    edge_rng = make_generator(derive(rep_seed, TAG_GRAPH))
    uniforms = edge_rng.random(math.comb(n, 2))
    if config.family == "er":
        return SimpleGraph.from_packed(n, uniforms < config.p_mean)
    if config.family == "sbm2":
        probs = build_sbm2_probs(n, config.p_mean, config.heterogeneity)
    elif config.family == "sbm3":
        probs = build_sbm3_probs(
            n, config.p_mean, config.heterogeneity, derive(rep_seed, TAG_MATRIX)
        )
    else:
        probs = build_covariate_probs(
            n, config.p_mean, config.heterogeneity, derive(rep_seed, TAG_MATRIX)
        )
    return SimpleGraph.from_packed(n, uniforms < probs.upper_values())


def run_scenario(
    config: ScenarioConfig,
    tests: Sequence[TestSpec],
    R: int,
    master_seed: int,
    progress: Callable[[int, int], None] | None = None,
) -> list[PowerCurvePoint]:
    """Estimate rejection rates for each test over R fresh replicates."""
    if R < 1:
        raise InputError("need at least one replication")
    if not tests:
        raise InputError("need at least one test spec")
    for spec in tests:
        if config.n < evaluate.FUNCTIONAL_MIN_N[spec.functional]:
            raise InputError(
                f"functional {spec.functional} needs n >= "
                f"{evaluate.FUNCTIONAL_MIN_N[spec.functional]}, scenario has n={config.n}"
            )
    sid = scenario_id(config)
    n = config.n
    functionals = tuple(dict.fromkeys(spec.functional for spec in tests))
    boot_specs = [s for s in tests if s.mode != MODE_ASYMPTOTIC]
    boot_functionals = tuple(dict.fromkeys(s.functional for s in boot_specs))
    boot_sizes = sorted({s.B for s in boot_specs})
    n_pairs = math.comb(n, 2)

    packed = np.empty((R, n_pairs), dtype=bool)
    rep_seeds = [derive(master_seed, sid, b) for b in range(R)]
    for b, rep_seed in enumerate(rep_seeds):
        packed[b] = _replicate_graph(config, rep_seed).packed_upper()
        if progress is not None and (b + 1) % 200 == 0:
            progress(b + 1, R)

    stats = evaluate.batch_statistics(packed, n, functionals)
    p_hat = stats["p_hat"]
    degenerate = (p_hat <= 0.0) | (p_hat >= 1.0)

    rejections = {id(spec): 0 for spec in tests}
    failures = {id(spec): 0 for spec in tests}
    crit_cache = {spec.alpha: _z_crit(spec.alpha) for spec in tests}

    for b in range(R):
        if degenerate[b]:
            for spec in tests:
                failures[id(spec)] += 1
            continue
        ph = float(p_hat[b])
        boot_samples = {}
        if boot_specs:
            graph_b = SimpleGraph.from_packed(n, packed[b])
            for B in boot_sizes:
                boot_samples[B] = bootstrap_null_samples(
                    graph_b, boot_functionals, B, rep_seeds[b]
                )
        for spec in tests:
            x = float(stats[spec.functional][b])
            if spec.mode == MODE_ASYMPTOTIC:
                z = standardized_statistic(spec.functional, x, n, ph)
                reject = abs(z) > crit_cache[spec.alpha]
            else:
                boot = boot_samples[spec.B][spec.functional]
                if spec.mode == MODE_BOOT_PERCENTILE:
                    reject, _, _ = percentile_decision(x, boot.values, spec.alpha)
                else:
                    reject, _, _ = hall_decision(
                        x, boot.values, boot.null_center, spec.alpha
                    )
            if reject:
                rejections[id(spec)] += 1

    return [
        PowerCurvePoint(
            scenario=sid,
            family=config.family,
            n=n,
            p_mean_rule=config.p_mean_rule,
            p_mean_value=config.p_mean,
            heterogeneity=config.heterogeneity,
            functional=spec.functional,
            mode=spec.mode,
            alpha=spec.alpha,
            B=spec.B if spec.mode != MODE_ASYMPTOTIC else 0,
            R=R,
            rejections=rejections[id(spec)],
            failures=failures[id(spec)],
            master_seed=master_seed,
        )
        for spec in tests
    ]


def write_power_csv(points: Sequence[PowerCurvePoint], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for point in points:
            writer.writerow(point.to_row())


def paper_grid_scenarios() -> list[ScenarioConfig]:
    """The full scenario cross of the power study."""
    scenarios = []
    for family, het_grid in (
        ("sbm2", PAPER_LAMBDA_GRID),
        ("sbm3", PAPER_LAMBDA_GRID),
        ("covariate", PAPER_SIGMA2_GRID),
    ):
        for n in PAPER_N_GRID:
            for rule in PAPER_RULES:
                for het in het_grid:
                    scenarios.append(ScenarioConfig.from_rule(family, n, rule, het))
    return scenarios


def run_paper_grid(
    output_path: str | Path,
    master_seed: int,
    scale: float = 1.0,
    progress: Callable[[int, int, str], None] | None = None,
) -> list[PowerCurvePoint]:
    """Run the whole grid and write one CSV row per cell.

    ``scale`` shrinks both R and B proportionally for desk-scale runs;
    scale=1 is the full study (R=1000, B=500).  Asymptotic rows carry
    B=0 since no resampling is involved.
    """
    if not 0.0 < scale <= 1.0:
        raise InputError(f"scale must lie in (0, 1], got {scale}")
    R = max(1, round(PAPER_R * scale))
    B = max(1, round(PAPER_B * scale))
    specs = [
        TestSpec(functional=f, mode=m, alpha=PAPER_ALPHA, B=B)
        for f in PAPER_FUNCTIONALS
        for m in MODES
    ]
    scenarios = paper_grid_scenarios()
    points: list[PowerCurvePoint] = []
    for idx, config in enumerate(scenarios):
        if progress is not None:
            progress(idx, len(scenarios), scenario_id(config))
        points.extend(run_scenario(config, specs, R, master_seed))
    write_power_csv(points, output_path)
    return points
