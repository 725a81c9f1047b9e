"""Exact model counting by exhaustive enumeration.

This module is the validation oracle: it never touches the SAT solver or
the parity-constraint CNF encoding, so it can sit on the other side of
dual-path checks.  Two independent implementations are provided and
cross-checked in the test suite:

* ``exact_count`` -- depth-first enumeration over variables 1..n with
  early pruning when a clause is falsified and a shortcut when every
  clause is already satisfied.  Simple enough to trust; no caching.
* ``exact_count_vectorized`` -- evaluates every assignment with packed
  64-assignment-per-word numpy sweeps.  No pruning at all.

``count_with_xor`` restricts the count to a hash cell by evaluating the
parity rows directly on each assignment (word-parallel XOR), deliberately
bypassing the CNF encoding used by the solver path.
"""

from __future__ import annotations

import numpy as np

from .cnf import CnfFormula
from .xorhash import CellTarget, XorHash

DEFAULT_LIMIT_VARS = 30

_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)
# Within-word value of bit position p (assignment index bit 0..5).
_LOW_PATTERNS = [
    np.uint64(sum(1 << j for j in range(64) if (j >> p) & 1)) for p in range(6)
]


class OracleRangeError(ValueError):
    """Formula exceeds the enumeration oracle's variable limit."""


def _check_limit(formula: CnfFormula, limit_vars: int) -> None:
    if formula.num_vars > limit_vars:
        raise OracleRangeError(
            "oracle out of range: %d variables exceeds limit %d"
            % (formula.num_vars, limit_vars)
        )


def exact_count(formula: CnfFormula, limit_vars: int = DEFAULT_LIMIT_VARS) -> int:
    """Exact number of models, by pruned depth-first enumeration."""
    _check_limit(formula, limit_vars)
    n = formula.num_vars
    clauses = formula.clauses
    m = len(clauses)
    if m == 0:
        return 1 << n
    if any(len(c) == 0 for c in clauses):
        return 0

    # Occurrence lists indexed by literal code 2v / 2v+1.
    occ_sat: list[list[int]] = [[] for _ in range(2 * n + 2)]
    occ_fal: list[list[int]] = [[] for _ in range(2 * n + 2)]
    for ci, clause in enumerate(clauses):
        for lit in clause:
            v = abs(lit)
            pos = lit > 0
            # Assigning v=True satisfies positive literals, falsifies negative.
            occ_sat[(v << 1) | (0 if pos else 1)].append(ci)
            occ_fal[(v << 1) | (1 if pos else 0)].append(ci)

    remaining = [len(c) for c in clauses]  # non-falsified literals per clause
    sat_by = [0] * m  # satisfying assigned literals per clause
    num_sat = 0

    def recurse(v: int) -> int:
        nonlocal num_sat
        if num_sat == m:
            return 1 << (n - v + 1)
        if v > n:
            return 1
        total = 0
        for phase in (0, 1):
            code = (v << 1) | (phase ^ 1)  # phase 0 -> assign False
            conflict = False
            fal = occ_fal[code]
            undo_f = 0
            for ci in fal:
                remaining[ci] -= 1
                undo_f += 1
                if remaining[ci] == 0 and sat_by[ci] == 0:
                    conflict = True
                    break
            if not conflict:
                sat = occ_sat[code]
                for ci in sat:
                    if sat_by[ci] == 0:
                        num_sat += 1
                    sat_by[ci] += 1
                total += recurse(v + 1)
                for ci in sat:
                    sat_by[ci] -= 1
                    if sat_by[ci] == 0:
                        num_sat -= 1
            for ci in fal[:undo_f]:
                remaining[ci] += 1
        return total

    return recurse(1)


def _chunks(n: int, chunk_words: int = 1 << 16):
    """Yield (word_index_array, within-word validity mask) covering {0,1}^n."""
    if n <= 6:
        valid = _FULL if n == 6 else np.uint64((1 << (1 << n)) - 1)
        yield np.zeros(1, dtype=np.uint64), valid
        return
    total_words = 1 << (n - 6)
    for start in range(0, total_words, chunk_words):
        stop = min(start + chunk_words, total_words)
        yield np.arange(start, stop, dtype=np.uint64), _FULL


def _var_pattern(words: np.ndarray, var: int) -> np.ndarray:
    """Truth of variable ``var`` across the 64 assignments of each word."""
    p = var - 1
    if p < 6:
        return np.broadcast_to(_LOW_PATTERNS[p], words.shape)
    return ((words >> np.uint64(p - 6)) & np.uint64(1)) * _FULL


def _satisfaction_mask(words, clauses, patterns) -> np.ndarray:
    sat = np.full(words.shape, _FULL)
    acc = np.empty(words.shape, dtype=np.uint64)
    for clause in clauses:
        acc[:] = 0
        for lit in clause:
            pat = patterns(abs(lit))
            if lit > 0:
                np.bitwise_or(acc, pat, out=acc)
            else:
                np.bitwise_or(acc, ~pat, out=acc)
        np.bitwise_and(sat, acc, out=sat)
    return sat


def _parity_pattern(words, row, patterns) -> np.ndarray:
    acc = np.zeros(words.shape, dtype=np.uint64)
    coeffs = row.coeffs
    v = 1
    while coeffs:
        if coeffs & 1:
            np.bitwise_xor(acc, patterns(v), out=acc)
        coeffs >>= 1
        v += 1
    return acc


def _pattern_cache(words):
    cache: dict[int, np.ndarray] = {}

    def patterns(var: int) -> np.ndarray:
        pat = cache.get(var)
        if pat is None:
            pat = _var_pattern(words, var)
            cache[var] = pat
        return pat

    return patterns


def exact_count_vectorized(formula: CnfFormula, limit_vars: int = DEFAULT_LIMIT_VARS) -> int:
    """Exact model count by brute-force evaluation of every assignment."""
    _check_limit(formula, limit_vars)
    if any(len(c) == 0 for c in formula.clauses):
        return 0
    total = 0
    for words, valid in _chunks(formula.num_vars):
        patterns = _pattern_cache(words)
        sat = _satisfaction_mask(words, formula.clauses, patterns)
        np.bitwise_and(sat, valid, out=sat)
        total += int(np.bitwise_count(sat).sum())
    return total


def count_with_xor(
    formula: CnfFormula,
    h: XorHash,
    alpha: CellTarget,
    limit_vars: int = DEFAULT_LIMIT_VARS,
) -> int:
    """|{y : y models the formula and h(y) = alpha}| by direct enumeration.

    Evaluates the parity rows on raw assignments; the solver-facing CNF
    encoding is never involved, keeping this usable as an independent check
    of that path.
    """
    _check_limit(formula, limit_vars)
    if h.n != formula.num_vars:
        raise ValueError("hash is over %d variables, formula has %d" % (h.n, formula.num_vars))
    if alpha.m != h.m:
        raise ValueError("alpha has %d bits, hash has %d rows" % (alpha.m, h.m))
    if any(len(c) == 0 for c in formula.clauses):
        return 0
    total = 0
    for words, valid in _chunks(formula.num_vars):
        patterns = _pattern_cache(words)
        sat = _satisfaction_mask(words, formula.clauses, patterns)
        for i, row in enumerate(h.rows):
            rhs = row.offset ^ ((alpha.bits >> i) & 1)
            parity = _parity_pattern(words, row, patterns)
            if rhs:
                np.bitwise_and(sat, parity, out=sat)
            else:
                np.bitwise_and(sat, ~parity, out=sat)
        np.bitwise_and(sat, valid, out=sat)
        total += int(np.bitwise_count(sat).sum())
    return total


def cell_counts(
    formula: CnfFormula,
    h: XorHash,
    limit_vars: int = DEFAULT_LIMIT_VARS,
) -> np.ndarray:
    """Model count of every cell: entry alpha is |{y : models, h(y)=alpha}|.

    One sweep over the assignment space regardless of the number of cells;
    the returned array has 2^m entries and sums to the formula's count.
    """
    _check_limit(formula, limit_vars)
    if h.n != formula.num_vars:
        raise ValueError("hash is over %d variables, formula has %d" % (h.n, formula.num_vars))
    counts = np.zeros(1 << h.m, dtype=np.int64)
    if any(len(c) == 0 for c in formula.clauses):
        return counts
    for words, valid in _chunks(formula.num_vars):
        patterns = _pattern_cache(words)
        sat = _satisfaction_mask(words, formula.clauses, patterns)
        np.bitwise_and(sat, valid, out=sat)
        values = [
            _parity_pattern(words, row, patterns) ^ (_FULL * np.uint64(row.offset))
            for row in h.rows
        ]
        for alpha in range(1 << h.m):
            cell = sat.copy()
            for i, value in enumerate(values):
                if (alpha >> i) & 1:
                    np.bitwise_and(cell, value, out=cell)
                else:
                    np.bitwise_and(cell, ~value, out=cell)
            counts[alpha] += int(np.bitwise_count(cell).sum())
    return counts
