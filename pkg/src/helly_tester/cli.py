"""Command line front end.

Exit codes: 0 PASS (or success), 1 FAIL, 2 usage error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .analysis import count_intersecting_tuples, depth_bruteforce, verify_corollary
from .errors import HellyError, ParamOutOfRange
from .experiment import MIN_TRIALS, bound_from_calibration, calibrate
from .feasibility import OracleConfig
from .generators import GenSpec, Kind, generate
from .serialize import dumps_instance, load_instance, result_record
from .tester import TesterConfig, run_tester

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

CSV_HEADER = ["trials", "pass_rate", "predicted", "p", "t", "z", "seed"]


class UsageError(Exception):
    pass


def _json_out(obj):
    # inf z-scores are legal results; encode them as strings
    def fix(v):
        if isinstance(v, float) and not math.isfinite(v):
            return str(v)
        if isinstance(v, dict):
            return {k: fix(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [fix(x) for x in v]
        return v

    print(json.dumps(fix(obj), indent=2, allow_nan=False))


def cmd_gen(args):
    kind = Kind(args.kind)
    if kind is Kind.CALIBRATED_1D:
        if args.k is None:
            raise UsageError("--k is required with --kind calibrated1d")
        if args.d not in (None, 1):
            raise UsageError("calibrated1d is one-dimensional; drop --d or pass --d 1")
        d = 1
    else:
        if args.k is not None:
            raise UsageError("--k only applies to --kind calibrated1d")
        if args.d is None:
            raise UsageError(f"--d is required with --kind {args.kind}")
        d = args.d
        if kind is Kind.RANDOM_LINEAR and d not in (1, 2, 3):
            raise UsageError("random-linear supports --d 1, 2 or 3")
    try:
        spec = GenSpec(kind, args.n, d, args.seed, args.k)
    except ParamOutOfRange as exc:
        raise UsageError(str(exc)) from exc
    text = dumps_instance(generate(spec))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _tester_config(args) -> TesterConfig:
    oracle_kw = {"rng_seed": args.seed}
    if args.tol is not None:
        oracle_kw["feas_tol"] = args.tol
    if args.max_iters is not None:
        oracle_kw["proj_max_iters"] = args.max_iters
    try:
        return TesterConfig(
            alpha=args.alpha,
            epsilon=args.epsilon,
            rounds_override=args.rounds,
            rng_seed=args.seed,
            oracle=OracleConfig(**oracle_kw),
        )
    except ParamOutOfRange as exc:
        raise UsageError(f"ParamOutOfRange: {exc}") from exc


def cmd_test(args):
    cfg = _tester_config(args)
    instance = load_instance(args.input)
    verdict = run_tester(instance, cfg)
    _json_out(result_record(verdict, cfg))
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def cmd_enumerate(args):
    instance = load_instance(args.input)
    q = args.q if args.q is not None else min(instance.dimension + 1, instance.n)
    if not 1 <= q <= instance.n:
        raise UsageError(f"--q must lie in [1, {instance.n}]")
    if args.alpha is not None and not 0.0 < args.alpha <= 1.0:
        raise UsageError("ParamOutOfRange: --alpha must lie in (0, 1]")
    census = count_intersecting_tuples(instance, q)
    depth = depth_bruteforce(instance)
    out = {"census": census.to_dict(), "depth": depth.to_dict()}
    if args.alpha is not None:
        out["corollary"] = verify_corollary(instance, args.alpha, depth=depth).to_dict()
    _json_out(out)
    return EXIT_PASS


def cmd_calibrate(args):
    if args.trials < MIN_TRIALS:
        raise UsageError(f"--trials must be at least {MIN_TRIALS}")
    try:
        cfg = TesterConfig(args.alpha, args.epsilon)
    except ParamOutOfRange as exc:
        raise UsageError(f"ParamOutOfRange: {exc}") from exc
    instance = load_instance(args.input)
    report = calibrate(instance, cfg, args.trials, args.master_seed)
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerow([
            report.trials, report.empirical_pass_rate, report.predicted_pass_rate,
            report.p_used, report.t_used, report.z_score, report.master_seed,
        ])
        sys.stdout.write(buf.getvalue())
        return EXIT_PASS
    out = {"calibration": report.to_dict(), "bound_check": None}
    try:
        depth = depth_bruteforce(instance).depth
    except HellyError:
        depth = None
    if depth is not None:
        threshold = args.alpha / (instance.dimension + 1) * instance.n
        bound = bound_from_calibration(report, depth, threshold, args.alpha, args.epsilon)
        out["bound_check"] = {k: v for k, v in bound.to_dict().items() if k != "calibration"}
    _json_out(out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helly-tester",
        description="Randomized testing of nonempty intersection of convex sets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("test", help="run the tester on an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, help="exact-path feasibility tolerance")
    p.add_argument("--max-iters", type=int, help="projection-path iteration cap")
    p.add_argument("--rounds", type=int, help="override the computed round count")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("enumerate", help="exhaustive census, depth and corollary check")
    p.add_argument("--input", required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("calibrate", help="Monte Carlo PASS-rate calibration")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else must not masquerade as FAIL
        print(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
