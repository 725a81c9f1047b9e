"""CNF formula data model, DIMACS parsing/serialization, and assignment evaluation.

Literals follow the DIMACS convention: a nonzero signed integer, where
``v`` means variable ``v`` is true and ``-v`` means it is false.  Variables
are numbered from 1.  Formulas and models are immutable once built, so they
can be shared freely across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class DimacsError(ValueError):
    """Raised for malformed DIMACS input or out-of-range literals."""


@dataclass(frozen=True)
class Model:
    """A total assignment to variables 1..num_vars, packed into an int.

    Bit ``v-1`` of ``bits`` holds the value of variable ``v``.
    """

    num_vars: int
    bits: int

    def __post_init__(self):
        if self.num_vars < 0 or not 0 <= self.bits < (1 << max(self.num_vars, 1)):
            raise ValueError("model bits out of range for num_vars=%d" % self.num_vars)

    @classmethod
    def from_values(cls, values) -> "Model":
        """Build a model from an iterable of truthy/falsy per-variable values."""
        bits = 0
        n = 0
        for n, v in enumerate(values, start=1):
            if v:
                bits |= 1 << (n - 1)
        return cls(n, bits)

    def value(self, var: int) -> bool:
        return bool((self.bits >> (var - 1)) & 1)

    def values(self) -> tuple[bool, ...]:
        return tuple(self.value(v) for v in range(1, self.num_vars + 1))

    def __len__(self) -> int:
        return self.num_vars


def normalize_clause(lits) -> tuple[int, ...] | None:
    """Drop duplicate literals; return None for tautological clauses.

    First occurrence order is preserved so serialization stays stable.
    """
    seen = set()
    out = []
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula over variables 1..num_vars.

    ``num_vars`` is authoritative: it defines the counting space even when
    some variables never occur in a clause (each such variable doubles the
    model count).  ``header_mismatch`` records a clause-count disagreement
    between a DIMACS header and the file body; it is a warning only and is
    ignored for equality.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    header_mismatch: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.num_vars < 1:
            raise DimacsError("formula must declare at least one variable")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise DimacsError("literal %d out of range 1..%d" % (lit, self.num_vars))

    @classmethod
    def from_clauses(cls, num_vars: int, clauses) -> "CnfFormula":
        """Build a formula, deduplicating literals and dropping tautologies."""
        normalized = []
        for clause in clauses:
            norm = normalize_clause(clause)
            if norm is not None:
                normalized.append(norm)
        return cls(num_vars, tuple(normalized))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def size(self) -> int:
        """Formula size: variable count plus total literal count."""
        return self.num_vars + sum(len(c) for c in self.clauses)


def parse_dimacs(text) -> CnfFormula:
    """Parse DIMACS CNF text (str or bytes) into a CnfFormula.

    Accepts 'c' comment lines anywhere, exactly one 'p cnf <n> <m>' header,
    and clauses as whitespace-separated nonzero integers each terminated by
    0 (clauses may span lines).  An empty clause is accepted and makes the
    formula unsatisfiable.  A header clause count that disagrees with the
    body sets ``header_mismatch`` instead of failing.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")

    num_vars = None
    header_clauses = None
    raw_clauses = []
    current: list[int] = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if num_vars is not None:
                raise DimacsError("line %d: duplicate header" % lineno)
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError("line %d: malformed header %r" % (lineno, stripped))
            try:
                num_vars = int(parts[2])
                header_clauses = int(parts[3])
            except ValueError:
                raise DimacsError("line %d: malformed header %r" % (lineno, stripped)) from None
            if num_vars < 1:
                raise DimacsError("header declares zero variables")
            if header_clauses < 0:
                raise DimacsError("header declares negative clause count")
            continue
        if num_vars is None:
            raise DimacsError("line %d: clause before header" % lineno)
        for tok in stripped.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError("line %d: bad token %r" % (lineno, tok)) from None
            if lit == 0:
                raw_clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(
                        "line %d: literal %d exceeds declared %d variables" % (lineno, lit, num_vars)
                    )
                current.append(lit)

    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("unterminated clause at end of input: %r" % (current,))

    mismatch = header_clauses != len(raw_clauses)
    formula = CnfFormula.from_clauses(num_vars, raw_clauses)
    if mismatch:
        object.__setattr__(formula, "header_mismatch", True)
    return formula


def parse_dimacs_file(path) -> CnfFormula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())


def serialize_dimacs(formula: CnfFormula) -> bytes:
    """Serialize to canonical DIMACS bytes; round-trips through parse_dimacs."""
    lines = ["p cnf %d %d" % (formula.num_vars, len(formula.clauses))]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return ("\n".join(lines) + "\n").encode("ascii")


def evaluate(formula: CnfFormula, model: Model) -> bool:
    """True iff every clause has at least one satisfied literal."""
    if model.num_vars != formula.num_vars:
        raise ValueError(
            "model has %d variables, formula declares %d" % (model.num_vars, formula.num_vars)
        )
    bits = model.bits
    for clause in formula.clauses:
        for lit in clause:
            if ((bits >> (lit - 1)) & 1) if lit > 0 else not ((bits >> (-lit - 1)) & 1):
                break
        else:
            return False
    return True
