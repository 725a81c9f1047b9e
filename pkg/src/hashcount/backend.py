"""Bounded model enumeration: up to v distinct models, projected onto the
original variables.

A query conjoins a CNF formula with parity-constraint clauses (which may
mention auxiliary variables above the formula's range) and asks for
``min(v, #models)`` distinct assignments to the ORIGINAL variables.  After
each model the negation of its projection literals is added as a blocking
clause -- never auxiliary literals, whose values are functionally determined
and would otherwise skew the count.

Two interchangeable back ends: the built-in CDCL solver (incremental, the
default) and an external solver subprocess speaking DIMACS on stdin and
SAT-competition 's'/'v' lines on stdout.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, field
from time import monotonic

from .cnf import CnfFormula, Model
from .solver import Solver


@dataclass(frozen=True)
class BoundedQuery:
    """Enumeration request over formula AND constraint_clauses.

    Projection is always variables 1..formula.num_vars; ``num_total_vars``
    covers any auxiliaries referenced by the constraint clauses.
    """

    formula: CnfFormula
    constraint_clauses: tuple[tuple[int, ...], ...] = ()
    num_total_vars: int | None = None
    bound: int = 1
    time_budget: float | None = None

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("bound must be >= 1")
        total = self.formula.num_vars if self.num_total_vars is None else self.num_total_vars
        if total < self.formula.num_vars:
            raise ValueError("num_total_vars below formula variable count")
        object.__setattr__(self, "num_total_vars", total)
        object.__setattr__(self, "constraint_clauses", tuple(tuple(c) for c in self.constraint_clauses))
        for clause in self.constraint_clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > total:
                    raise ValueError("constraint literal %d out of range" % lit)


@dataclass(frozen=True)
class EnumerationResult:
    """Outcome of bounded enumeration.

    ``completed`` means the bound was hit or the model space was exhausted;
    otherwise the time budget ran out and ``models`` holds the partial set,
    which callers must treat as informational only.
    """

    completed: bool
    models: tuple[Model, ...]
    sat_calls: int = field(default=0, compare=False)

    @property
    def count(self) -> int:
        return len(self.models)

    @property
    def partial_count(self) -> int:
        return len(self.models)


def _blocking_clause(bits: int, num_vars: int) -> list[int]:
    return [-v if (bits >> (v - 1)) & 1 else v for v in range(1, num_vars + 1)]


def bounded_sat(query: BoundedQuery, external: "ExternalDimacsSolver | None" = None) -> EnumerationResult:
    """Enumerate min(bound, #models) distinct projected models.

    Deterministic for a fixed query and back end.  With a time budget, the
    clock is checked between solver calls and polled inside the internal
    solver's conflict loop.
    """
    if external is not None:
        return _bounded_sat_external(query, external)

    deadline = None
    if query.time_budget is not None:
        deadline = monotonic() + query.time_budget

    n = query.formula.num_vars
    solver = Solver(query.num_total_vars)
    for clause in query.formula.clauses:
        solver.add_clause(clause)
    for clause in query.constraint_clauses:
        solver.add_clause(clause)

    models: list[Model] = []
    sat_calls = 0
    while True:
        if deadline is not None and monotonic() > deadline:
            return EnumerationResult(False, tuple(models), sat_calls)
        sat_calls += 1
        outcome = solver.solve(deadline)
        if outcome is None:
            return EnumerationResult(False, tuple(models), sat_calls)
        if outcome is False:
            break
        bits = solver.model_bits(n)
        models.append(Model(n, bits))
        if len(models) >= query.bound:
            break
        solver.add_clause(_blocking_clause(bits, n))
    return EnumerationResult(True, tuple(models), sat_calls)


class ExternalSolverError(RuntimeError):
    """The external solver violated the expected output protocol."""


class ExternalDimacsSolver:
    """Adapter for a one-shot solver subprocess.

    Protocol: DIMACS CNF on stdin; stdout must contain an
    's SATISFIABLE' or 's UNSATISFIABLE' status line, with models given on
    'v' lines of signed literals terminated by 0.
    """

    def __init__(self, argv):
        self.argv = list(argv)

    def solve(self, clauses, num_vars: int, timeout: float | None = None):
        """Return packed assignment bits for vars 1..num_vars, or None if unsat.

        Raises subprocess.TimeoutExpired when the child exceeds ``timeout``.
        """
        lines = ["p cnf %d %d" % (num_vars, len(clauses))]
        for clause in clauses:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        dimacs = ("\n".join(lines) + "\n").encode("ascii")
        proc = subprocess.run(
            self.argv,
            input=dimacs,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            timeout=timeout,
        )
        status = None
        lits: list[int] = []
        for line in proc.stdout.decode("ascii", "replace").splitlines():
            line = line.strip()
            if line.startswith("s "):
                status = line[2:].strip()
            elif line.startswith("v ") or line == "v":
                lits.extend(int(tok) for tok in line[1:].split())
        if status == "UNSATISFIABLE":
            return None
        if status != "SATISFIABLE":
            raise ExternalSolverError("missing solution status line from %r" % (self.argv,))
        bits = 0
        seen = set()
        for lit in lits:
            if lit == 0:
                continue
            seen.add(abs(lit))
            if lit > 0 and lit <= num_vars:
                bits |= 1 << (lit - 1)
        if not set(range(1, num_vars + 1)) <= seen:
            raise ExternalSolverError("external solver returned a partial assignment")
        return bits


def _bounded_sat_external(query: BoundedQuery, external: ExternalDimacsSolver) -> EnumerationResult:
    deadline = None
    if query.time_budget is not None:
        deadline = monotonic() + query.time_budget

    n = query.formula.num_vars
    clauses = [list(c) for c in query.formula.clauses]
    clauses.extend(list(c) for c in query.constraint_clauses)

    models: list[Model] = []
    seen_bits = set()
    sat_calls = 0
    while True:
        remaining = None
        if deadline is not None:
            remaining = deadline - monotonic()
            if remaining <= 0:
                return EnumerationResult(False, tuple(models), sat_calls)
        sat_calls += 1
        try:
            full_bits = external.solve(clauses, query.num_total_vars, timeout=remaining)
        except subprocess.TimeoutExpired:
            return EnumerationResult(False, tuple(models), sat_calls)
        if full_bits is None:
            break
        bits = full_bits & ((1 << n) - 1)
        if bits in seen_bits:
            raise ExternalSolverError("external solver repeated a blocked model")
        seen_bits.add(bits)
        models.append(Model(n, bits))
        if len(models) >= query.bound:
            break
        clauses.append(_blocking_clause(bits, n))
    return EnumerationResult(True, tuple(models), sat_calls)
