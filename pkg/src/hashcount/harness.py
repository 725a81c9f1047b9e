"""Batch experiment harness: approximate vs exact counts over a directory.

Runs the counter for every (file, seed) pair, joins the results with exact
counts where the enumeration oracle can reach them, and reports the
within-tolerance frequency plus the L1 relative error
sum|approx - exact| / sum(exact) across the suite.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .cnf import CnfFormula, parse_dimacs_file
from .engine import ApproxParams, approx_mc, within_tolerance
from .exact import DEFAULT_LIMIT_VARS, OracleRangeError, exact_count

CSV_COLUMNS = [
    "file", "n", "clauses", "seed", "exact", "approx",
    "lo", "hi", "within", "t", "non_bot", "sat_calls", "ms",
]


@dataclass(frozen=True)
class BenchmarkRecord:
    """One (file, seed) outcome; ``within`` is defined only when both counts are."""

    file: str
    n: int | None
    clauses: int | None
    seed: int
    exact: int | None
    approx: int | None
    lo: float | None
    hi: float | None
    within: bool | None
    t: int | None
    non_bot: int | None
    sat_calls: int | None
    ms: float | None
    error: str | None = None

    def csv_row(self) -> list:
        def cell(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "1" if x else "0"
            return x

        return [cell(getattr(self, col)) for col in CSV_COLUMNS]


def _run_one(args):
    name, formula, exact, params = args
    report = approx_mc(formula, params)
    approx = report.final_count
    lo = hi = None
    if report.interval is not None:
        lo, hi = report.interval
    within = None
    if exact is not None and approx is not None:
        within = within_tolerance(approx, exact, params.epsilon)
    return BenchmarkRecord(
        file=name,
        n=formula.num_vars,
        clauses=len(formula.clauses),
        seed=params.seed,
        exact=exact,
        approx=approx,
        lo=lo,
        hi=hi,
        within=within,
        t=report.t,
        non_bot=report.non_bot,
        sat_calls=report.sat_calls,
        ms=report.wall_time_ms,
    )


def run_batch(
    files,
    params: ApproxParams,
    seeds,
    oracle_limit: int = DEFAULT_LIMIT_VARS,
    threads: int = 1,
) -> list[BenchmarkRecord]:
    """Run every (file, seed) pair; failures become records, not exceptions.

    Output is sorted by (file, seed) regardless of scheduling.
    """
    seeds = list(seeds)
    loaded: list[tuple[str, CnfFormula | None, int | None, str | None]] = []
    for path in sorted(str(p) for p in files):
        try:
            formula = parse_dimacs_file(path)
        except (OSError, ValueError) as exc:
            loaded.append((path, None, None, str(exc)))
            continue
        exact: int | None
        try:
            exact = exact_count(formula, oracle_limit)
        except OracleRangeError:
            exact = None
        loaded.append((path, formula, exact, None))

    tasks = []
    failures = []
    for path, formula, exact, error in loaded:
        for seed in sorted(seeds):
            if formula is None:
                failures.append(
                    BenchmarkRecord(
                        file=path, n=None, clauses=None, seed=seed,
                        exact=None, approx=None, lo=None, hi=None, within=None,
                        t=None, non_bot=None, sat_calls=None, ms=None, error=error,
                    )
                )
            else:
                run_params = ApproxParams(**{**params.to_json_dict(), "seed": seed})
                tasks.append((path, formula, exact, run_params))

    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_run_one, tasks))
    else:
        records = [_run_one(task) for task in tasks]

    records.extend(failures)
    records.sort(key=lambda r: (r.file, r.seed))
    return records


def write_csv(records, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.csv_row())


def csv_text(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def aggregate(records) -> dict:
    """Suite-level statistics; L1 and frequency use rows with both counts."""
    paired = [r for r in records if r.exact is not None and r.approx is not None]
    within_defined = len(paired)
    frequency = None
    l1 = None
    if paired:
        frequency = sum(1 for r in paired if r.within) / within_defined
        denom = sum(r.exact for r in paired)
        if denom > 0:
            l1 = sum(abs(r.approx - r.exact) for r in paired) / denom
    return {
        "rows": len(records),
        "files": len({r.file for r in records}),
        "seeds": sorted({r.seed for r in records}),
        "failed_rows": sum(1 for r in records if r.error is not None),
        "all_bot_rows": sum(1 for r in records if r.error is None and r.approx is None),
        "within_defined": within_defined,
        "within_frequency": frequency,
        "l1_relative_error": l1,
        "total_sat_calls": sum(r.sat_calls or 0 for r in records),
        "total_ms": sum(r.ms or 0.0 for r in records),
    }
