"""Conflict-driven SAT solver used as the enumeration back end.

Scoped to desk-scale instances: two-literal watching, first-UIP clause
learning, activity-based decisions, phase saving, and Luby restarts, with
no clause-database reduction.  Fully deterministic for a fixed clause
input order: decisions break ties on variable index and there is no
randomization anywhere.

Internally a literal is an int code ``2*v`` (v true) or ``2*v + 1``
(v false); the public surface speaks DIMACS signed ints.
"""

from __future__ import annotations

from heapq import heappush, heappop
from time import monotonic

_UNASSIGNED = 0
_TRUE = 1
_FALSE = 2


def _code(lit: int) -> int:
    return (lit << 1) if lit > 0 else ((-lit << 1) | 1)


def _luby(x: int) -> int:
    """Term x (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x %= size
    return 1 << seq


class Solver:
    """CDCL solver over a fixed variable range 1..num_vars.

    Clauses may be added between ``solve()`` calls (the enumeration loop
    adds blocking clauses this way); learned clauses are kept across calls.
    """

    RESTART_BASE = 100
    DEADLINE_POLL_MASK = 127

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.values = bytearray(2 * num_vars + 2)
        self.levels = [0] * (num_vars + 1)
        self.reasons: list = [None] * (num_vars + 1)
        self.watches: list[list] = [[] for _ in range(2 * num_vars + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.saved_phase = bytearray(num_vars + 1)  # 0 -> try False first
        self.order: list = []
        self._seen = bytearray(num_vars + 1)
        self.ok = True
        self.conflicts = 0
        for v in range(1, num_vars + 1):
            heappush(self.order, (0.0, v))

    # ----- clause management -------------------------------------------------

    def add_clause(self, lits) -> bool:
        """Add a clause of DIMACS literals; False if the instance became unsat.

        Resets the search to decision level 0 first, so it is safe to call
        between solves.
        """
        if not self.ok:
            return False
        self._cancel_until(0)
        clause = []
        seen = set()
        for lit in lits:
            code = _code(lit)
            if code ^ 1 in seen:
                return True  # tautology, trivially satisfied
            if code not in seen:
                seen.add(code)
                clause.append(code)
        return self._add_clause_codes(clause)

    def _add_clause_codes(self, clause: list[int]) -> bool:
        # Caller guarantees decision level 0, so assigned means fixed:
        # drop false literals, skip clauses with a true one.
        values = self.values
        reduced = []
        for code in clause:
            val = values[code]
            if val == _TRUE:
                return True
            if val == _UNASSIGNED:
                reduced.append(code)
        if not reduced:
            self.ok = False
            return False
        if len(reduced) == 1:
            self._enqueue(reduced[0], None)
            self.ok = self._propagate() is None
            return self.ok
        self.watches[reduced[0]].append(reduced)
        self.watches[reduced[1]].append(reduced)
        return True

    # ----- assignment bookkeeping --------------------------------------------

    def _enqueue(self, code: int, reason) -> None:
        values = self.values
        values[code] = _TRUE
        values[code ^ 1] = _FALSE
        v = code >> 1
        self.levels[v] = len(self.trail_lim)
        self.reasons[v] = reason
        self.saved_phase[v] = (code & 1) ^ 1
        self.trail.append(code)

    def _cancel_until(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        values = self.values
        order = self.order
        activity = self.activity
        bound = self.trail_lim[level]
        for i in range(len(self.trail) - 1, bound - 1, -1):
            code = self.trail[i]
            v = code >> 1
            values[code] = _UNASSIGNED
            values[code ^ 1] = _UNASSIGNED
            self.reasons[v] = None
            heappush(order, (-activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[level:]
        self.qhead = bound

    # ----- search ------------------------------------------------------------

    def _propagate(self):
        """Propagate pending assignments; return a conflicting clause or None."""
        values = self.values
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            code = trail[self.qhead]
            self.qhead += 1
            falsified = code ^ 1
            ws = watches[falsified]
            if not ws:
                continue
            watches[falsified] = kept = []
            n_ws = len(ws)
            for wi in range(n_ws):
                clause = ws[wi]
                if clause[0] == falsified:
                    clause[0] = clause[1]
                    clause[1] = falsified
                first = clause[0]
                if values[first] == _TRUE:
                    kept.append(clause)
                    continue
                for k in range(2, len(clause)):
                    other = clause[k]
                    if values[other] != _FALSE:
                        clause[1] = other
                        clause[k] = falsified
                        watches[other].append(clause)
                        break
                else:
                    kept.append(clause)
                    if values[first] == _FALSE:
                        kept.extend(ws[wi + 1:])
                        self.qhead = len(trail)
                        return clause
                    self._enqueue(first, clause)
        return None

    def _bump(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > 1e100:
            scale = 1e-100
            activity = self.activity
            for i in range(1, self.num_vars + 1):
                activity[i] *= scale
            self.var_inc *= scale
            act = activity[v]
        heappush(self.order, (-act, v))

    def _analyze(self, confl) -> tuple[list[int], int]:
        """First-UIP conflict analysis; returns (learnt clause, backjump level)."""
        seen = self._seen
        levels = self.levels
        reasons = self.reasons
        trail = self.trail
        current = len(self.trail_lim)
        learnt = [0]
        marked = []
        path = 0
        p = -1
        index = len(trail) - 1
        while True:
            start = 0 if p < 0 else 1
            for j in range(start, len(confl)):
                q = confl[j]
                v = q >> 1
                if not seen[v] and levels[v] > 0:
                    seen[v] = 1
                    marked.append(v)
                    self._bump(v)
                    if levels[v] >= current:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[index] >> 1]:
                index -= 1
            p = trail[index]
            index -= 1
            v = p >> 1
            confl = reasons[v]
            seen[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        for v in marked:
            seen[v] = 0
        if len(learnt) == 1:
            return learnt, 0
        # Watch the literal of the highest remaining level at position 1.
        max_i = 1
        for i in range(2, len(learnt)):
            if levels[learnt[i] >> 1] > levels[learnt[max_i] >> 1]:
                max_i = i
        learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
        return learnt, levels[learnt[1] >> 1]

    def _decide(self) -> bool:
        values = self.values
        order = self.order
        while order:
            neg_act, v = heappop(order)
            if values[v << 1] == _UNASSIGNED:
                self.trail_lim.append(len(self.trail))
                self._enqueue((v << 1) | (self.saved_phase[v] ^ 1), None)
                return True
        return False

    def solve(self, deadline: float | None = None):
        """Search for a satisfying assignment.

        Returns True (model available via ``model_bits``), False (unsat),
        or None if ``deadline`` (monotonic seconds) passed during search.
        """
        if not self.ok:
            return False
        if self._propagate() is not None:
            self.ok = False
            return False
        restart_count = 0
        budget = self.RESTART_BASE * _luby(restart_count)
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                if (
                    deadline is not None
                    and (self.conflicts & self.DEADLINE_POLL_MASK) == 0
                    and monotonic() > deadline
                ):
                    self._cancel_until(0)
                    return None
                learnt, back_level = self._analyze(confl)
                self._cancel_until(back_level)
                if len(learnt) > 1:
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                self._enqueue(learnt[0], learnt if len(learnt) > 1 else None)
                self.var_inc /= 0.95
            elif conflicts_here >= budget:
                restart_count += 1
                budget = self.RESTART_BASE * _luby(restart_count)
                conflicts_here = 0
                self._cancel_until(0)
            elif not self._decide():
                return True

    # ----- results -----------------------------------------------------------

    def value(self, var: int) -> bool:
        return self.values[var << 1] == _TRUE

    def model_bits(self, num_vars: int | None = None) -> int:
        """Current assignment of vars 1..num_vars packed into an int."""
        n = self.num_vars if num_vars is None else num_vars
        values = self.values
        bits = 0
        for v in range(1, n + 1):
            if values[v << 1] == _TRUE:
                bits |= 1 << (v - 1)
        return bits


def solve_once(clauses, num_vars: int, assumptions=()) -> tuple[bool, ...] | None:
    """One-shot satisfiability check over DIMACS-style clauses.

    Returns a full assignment (tuple of bools for vars 1..num_vars) or None
    if unsatisfiable.  Deterministic for a fixed clause and assumption order.
    """
    solver = Solver(num_vars)
    for lit in assumptions:
        if not solver.add_clause((lit,)):
            return None
    for clause in clauses:
        if not solver.add_clause(clause):
            return None
    if not solver.solve():
        return None
    return tuple(solver.value(v) for v in range(1, num_vars + 1))


def _main() -> int:
    """DIMACS filter: CNF on stdin, competition-style s/v lines on stdout.

    Lets the package's own solver stand in as the child process for the
    external-solver adapter.
    """
    import sys

    from .cnf import parse_dimacs

    formula = parse_dimacs(sys.stdin.buffer.read())
    assignment = solve_once(formula.clauses, formula.num_vars)
    if assignment is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if value else -v for v, value in enumerate(assignment, start=1)]
    for i in range(0, len(lits), 12):
        chunk = lits[i:i + 12]
        end = " 0" if i + 12 >= len(lits) else ""
        print("v " + " ".join(str(x) for x in chunk) + end)
    return 10


if __name__ == "__main__":
    raise SystemExit(_main())
