"""Command-line front end.

Subcommands: ``count`` (approximate count of one file, JSON report on
stdout, human summary on stderr), ``exact`` (exhaustive count), and
``batch`` (directory sweep producing a CSV plus aggregate JSON).

Exit codes: 0 success; 1 I/O or parse error; 2 the counting run failed in
every trial; 3 formula too large for the exact oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cnf import DimacsError, parse_dimacs_file
from .engine import ApproxParams, approx_mc
from .exact import DEFAULT_LIMIT_VARS, OracleRangeError, exact_count
from .harness import aggregate, run_batch, write_csv

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ALL_FAILED = 2
EXIT_ORACLE_RANGE = 3


def _add_count_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=0.75, help="tolerance in (0, 1]")
    parser.add_argument("--delta", type=float, default=0.1, help="1 - confidence, in (0, 1]")
    parser.add_argument("--iters-mode", choices=("optimized", "formula"), default="optimized",
                        help="how the trial count t is derived from delta")
    parser.add_argument("--leapfrog", choices=("on", "off"), default="on",
                        help="start later trials at the width earlier trials ended on")
    parser.add_argument("--per-call-timeout-ms", type=float, default=None,
                        help="time budget per enumeration call")
    parser.add_argument("--threads", type=int, default=1)


def _params(args, seed: int) -> ApproxParams:
    budget = None
    if args.per_call_timeout_ms is not None:
        budget = args.per_call_timeout_ms / 1000.0
    return ApproxParams(
        epsilon=args.epsilon,
        delta=args.delta,
        seed=seed,
        iter_count_mode=args.iters_mode,
        leapfrog=args.leapfrog == "on",
        per_call_budget=budget,
    )


def cmd_count(args) -> int:
    try:
        formula = parse_dimacs_file(args.path)
    except (OSError, DimacsError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    params = _params(args, args.seed)
    report = approx_mc(formula, params, threads=args.threads)
    print(report.to_json(trace=args.trace, indent=2 if args.json else None))
    if report.final_count is None:
        print("all %d trials failed; no estimate" % report.t, file=sys.stderr)
        return EXIT_ALL_FAILED
    lo, hi = report.interval
    print(
        "approx count %d, interval [%.6g, %.6g] at confidence %.3g; "
        "t=%d, usable trials=%d, sat calls=%d, %.0f ms"
        % (
            report.final_count, lo, hi, 1 - params.delta,
            report.t, report.non_bot, report.sat_calls, report.wall_time_ms,
        ),
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_exact(args) -> int:
    try:
        formula = parse_dimacs_file(args.path)
    except (OSError, DimacsError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    try:
        count = exact_count(formula, args.limit)
    except OracleRangeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ORACLE_RANGE
    if args.json:
        print(json.dumps({"exact_count": count}))
    else:
        print(count)
    return EXIT_OK


def cmd_batch(args) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        print("error: %s is not a directory" % directory, file=sys.stderr)
        return EXIT_INPUT
    files = sorted(str(p) for p in directory.iterdir() if p.suffix == ".cnf")
    if not files:
        print("error: no .cnf files in %s" % directory, file=sys.stderr)
        return EXIT_INPUT
    try:
        seeds = [int(tok) for tok in args.seeds.split(",") if tok.strip() != ""]
    except ValueError:
        print("error: --seeds must be comma-separated integers", file=sys.stderr)
        return EXIT_INPUT
    if not seeds:
        print("error: --seeds must name at least one seed", file=sys.stderr)
        return EXIT_INPUT

    params = _params(args, seeds[0])
    records = run_batch(files, params, seeds, oracle_limit=args.limit, threads=args.threads)
    with open(args.out_csv, "w", newline="") as out:
        write_csv(records, out)
    summary = aggregate(records)
    summary["epsilon"] = args.epsilon
    summary["delta"] = args.delta
    summary["csv"] = args.out_csv
    print(json.dumps(summary, sort_keys=True, indent=2 if args.json else None))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hashcount",
        description="Approximate CNF model counting with tolerance and confidence guarantees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="approximately count models of a DIMACS file")
    p_count.add_argument("path")
    _add_count_options(p_count)
    p_count.add_argument("--seed", type=int, default=1)
    p_count.add_argument("--json", action="store_true", help="pretty-print the JSON report")
    p_count.add_argument("--trace", action="store_true",
                         help="include per-width enumeration sizes in trial traces")
    p_count.set_defaults(func=cmd_count)

    p_exact = sub.add_parser("exact", help="exhaustively count models of a DIMACS file")
    p_exact.add_argument("path")
    p_exact.add_argument("--limit", type=int, default=DEFAULT_LIMIT_VARS,
                         help="refuse formulas with more variables than this")
    p_exact.add_argument("--json", action="store_true")
    p_exact.set_defaults(func=cmd_exact)

    p_batch = sub.add_parser("batch", help="run the counter across a directory of .cnf files")
    p_batch.add_argument("dir")
    _add_count_options(p_batch)
    p_batch.add_argument("--seeds", default="1", help="comma-separated seeds, one run per (file, seed)")
    p_batch.add_argument("--out-csv", required=True, help="path for the per-run CSV")
    p_batch.add_argument("--limit", type=int, default=DEFAULT_LIMIT_VARS,
                         help="exact-oracle variable limit")
    p_batch.add_argument("--json", action="store_true", help="pretty-print the aggregate JSON")
    p_batch.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
