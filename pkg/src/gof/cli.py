"""Command-line interface.

Subcommands: ``test`` (one test on one graph file, JSON report),
``power`` (simulation grids, CSV), ``theory`` (sensitivity curve, CSV),
``verify`` (arbitration checks, pass/fail table).

Exit codes: 0 success, 1 usage error or failed verification, 2
degenerate or unparseable input data, 3 internal error.  stdout and
output files carry data only; progress goes to stderr.

Only the standard library is imported at module level so that
``--threads`` can cap the numeric thread pools before numpy loads.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys

_USAGE_EXIT = 1
_DATA_EXIT = 2
_INTERNAL_EXIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse with the package's exit-code contract for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _apply_threads(threads: int | None) -> None:
    if threads is None:
        return
    if threads < 1:
        raise SystemExit(_USAGE_EXIT)
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ[var] = str(threads)


def _resolve_seed(explicit: int | None) -> int:
    """Explicit flag, then GOF_SEED from the environment, then random."""
    if explicit is not None:
        return explicit
    env = os.environ.get("GOF_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise _cli_usage(f"GOF_SEED must be an integer, got {env!r}")
    return secrets.randbits(63)


class _UsageError(Exception):
    pass


def _cli_usage(message: str) -> _UsageError:
    return _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="gof", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="cap numeric thread pools (results are independent of this)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run one goodness-of-fit test on a graph file")
    p_test.add_argument("--input", required=True, help="edge-list or adjacency CSV file")
    p_test.add_argument(
        "--functional", required=True, choices=("vn", "sc3", "sp3", "tc3")
    )
    p_test.add_argument(
        "--mode", required=True, choices=("asym", "boot-pct", "boot-hall")
    )
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--B", type=int, default=500, help="bootstrap replications")
    p_test.add_argument("--seed", type=int, default=None)

    p_power = sub.add_parser("power", help="power curves over scenario grids")
    p_power.add_argument("--grid", choices=("paper",), default=None)
    p_power.add_argument("--out", required=True, help="output CSV path")
    p_power.add_argument("--seed", type=int, default=None)
    p_power.add_argument("--scale", type=float, default=1.0)
    p_power.add_argument(
        "--family", choices=("er", "sbm2", "sbm3", "covariate"), default=None
    )
    p_power.add_argument("--n", type=int, default=None)
    p_power.add_argument(
        "--p-mean", default=None, help="density rule name or numeric value"
    )
    p_power.add_argument(
        "--lambda",
        "--sigma2",
        dest="heterogeneity",
        type=float,
        default=0.0,
        help="heterogeneity knob (lambda or sigma^2)",
    )
    p_power.add_argument(
        "--functionals",
        default="vn,sc3,sp3",
        help="comma-separated functional ids for single-scenario runs",
    )
    p_power.add_argument("--R", type=int, default=1000)
    p_power.add_argument("--B", type=int, default=500)
    p_power.add_argument("--alpha", type=float, default=0.05)

    p_theory = sub.add_parser(
        "theory", help="block-model sensitivity curve for the centered counts"
    )
    p_theory.add_argument("--n", type=int, default=100)
    p_theory.add_argument("--p-mean", type=float, default=0.3)
    p_theory.add_argument("--eps-grid", default="0:0.45:0.05", help="start:stop:step")
    p_theory.add_argument("--out", default=None, help="CSV path (default: stdout)")

    p_verify = sub.add_parser("verify", help="run the arbitration checks")
    p_verify.add_argument(
        "--sn-variance-convention",
        choices=("per-copy", "aut-scaled"),
        default="per-copy",
        help="variance convention for centered-count null moments",
    )
    return parser


def _parse_eps_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _cli_usage(f"--eps-grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError:
        raise _cli_usage(f"--eps-grid must be numeric, got {text!r}")
    if step <= 0 or stop < start:
        raise _cli_usage("--eps-grid needs step > 0 and stop >= start")
    grid = []
    k = 0
    while True:
        value = start + k * step
        if value > stop + 1e-12:
            break
        grid.append(round(value, 10))
        k += 1
    return grid


def cmd_test(args) -> int:
    from .goftests import MODE_ASYMPTOTIC, TestSpec, run_test
    from .graphs import load_graph

    graph = load_graph(args.input)
    seed = None if args.mode == MODE_ASYMPTOTIC else _resolve_seed(args.seed)
    spec = TestSpec(
        functional=args.functional,
        mode=args.mode,
        alpha=args.alpha,
        B=args.B,
        seed=seed,
    )
    report = run_test(graph, spec)
    print(report.to_json())
    return 0


def cmd_power(args) -> int:
    from .generators import ScenarioConfig
    from .goftests import MODES, TestSpec
    from .harness import run_paper_grid, run_scenario, write_power_csv

    seed = _resolve_seed(args.seed)
    if args.grid == "paper":
        def progress(idx, total, sid):
            print(f"scenario {idx + 1}/{total}: {sid}", file=sys.stderr, flush=True)

        run_paper_grid(args.out, master_seed=seed, scale=args.scale, progress=progress)
        print(f"wrote {args.out}", file=sys.stderr)
        return 0
    if args.family is None or args.n is None or args.p_mean is None:
        raise _cli_usage("need --grid paper, or --family with --n and --p-mean")
    config = ScenarioConfig.from_rule(
        args.family, args.n, args.p_mean, args.heterogeneity
    )
    functionals = [f.strip() for f in args.functionals.split(",") if f.strip()]
    if not functionals:
        raise _cli_usage("--functionals must name at least one functional")
    specs = [
        TestSpec(functional=f, mode=m, alpha=args.alpha, B=args.B)
        for f in functionals
        for m in MODES
    ]
    points = run_scenario(config, specs, R=args.R, master_seed=seed)
    write_power_csv(points, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def cmd_theory(args) -> int:
    from .power import sensitivity_csv, sensitivity_curve, write_sensitivity_csv

    grid = _parse_eps_grid(args.eps_grid)
    points = sensitivity_curve(args.n, args.p_mean, grid)
    if args.out:
        write_sensitivity_csv(points, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(sensitivity_csv(points))
    return 0


def cmd_verify(args) -> int:
    from .oracle import verification_suite

    results = verification_suite(sn_variance_convention=args.sn_variance_convention)
    width = max(len(r.name) for r in results)
    all_passed = True
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag}  {r.name:<{width}}  {r.detail}")
        all_passed = all_passed and r.passed
    print(f"{'OK' if all_passed else 'FAILED'}: {sum(r.passed for r in results)}"
          f"/{len(results)} checks passed")
    return 0 if all_passed else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_threads(args.threads)
    from .errors import (
        CalibrationError,
        DegenerateGraphError,
        GofError,
        GraphParseError,
        InputError,
        UnsupportedSizeError,
    )

    handlers = {
        "test": cmd_test,
        "power": cmd_power,
        "theory": cmd_theory,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except _UsageError as exc:
        print(f"gof: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (DegenerateGraphError, GraphParseError) as exc:
        print(f"gof: {exc}", file=sys.stderr)
        return _DATA_EXIT
    except (InputError, UnsupportedSizeError) as exc:
        print(f"gof: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (CalibrationError, GofError) as exc:
        print(f"gof: internal error: {exc}", file=sys.stderr)
        return _INTERNAL_EXIT
    except OSError as exc:
        print(f"gof: {exc}", file=sys.stderr)
        return _INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
