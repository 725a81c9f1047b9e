"""Random parity (XOR) hash functions over assignments, and their CNF encoding.

A hash with m rows maps {0,1}^n to {0,1}^m; row i computes
``offset_i XOR parity(coeffs_i AND y)``.  Drawing every offset and
coefficient bit independently and uniformly yields a 3-wise independent
family, which is what the counting engine's guarantees rest on.

Coefficient vectors are packed ints (bit v-1 is the coefficient of variable
v), so evaluating a row is one AND plus one popcount.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import Model
from .rng import RandomSource


@dataclass(frozen=True)
class XorRow:
    """One parity row: an offset bit and a packed coefficient vector."""

    offset: int
    coeffs: int

    def variables(self, n: int) -> tuple[int, ...]:
        """Ascending 1-based indices of variables with a set coefficient."""
        return tuple(v for v in range(1, n + 1) if (self.coeffs >> (v - 1)) & 1)


@dataclass(frozen=True)
class XorHash:
    n: int
    rows: tuple[XorRow, ...]

    @property
    def m(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class CellTarget:
    """Target output vector alpha; bit i-1 of ``bits`` is component i."""

    m: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << max(self.m, 1)):
            raise ValueError("alpha bits out of range for m=%d" % self.m)


def sample_hash(n: int, m: int, rng: RandomSource) -> XorHash:
    """Draw a hash uniformly: every offset and coefficient bit independent.

    Per row the offset bit is drawn first, then the n coefficient bits for
    variables 1..n.  m may be 0, giving the empty hash.
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    rows = tuple(XorRow(rng.bit(), rng.bits(n)) for _ in range(m))
    return XorHash(n, rows)


def sample_alpha(m: int, rng: RandomSource) -> CellTarget:
    """Draw a target cell index uniformly from {0,1}^m."""
    if m < 0:
        raise ValueError("need m >= 0")
    return CellTarget(m, rng.bits(m))


def apply_hash(h: XorHash, y) -> CellTarget:
    """Evaluate h on an assignment (a Model or packed int bits)."""
    if isinstance(y, Model):
        if y.num_vars != h.n:
            raise ValueError("assignment has %d variables, hash expects %d" % (y.num_vars, h.n))
        y = y.bits
    out = 0
    for i, row in enumerate(h.rows):
        if (((row.coeffs & y).bit_count() + row.offset) & 1) == 1:
            out |= 1 << i
    return CellTarget(h.m, out)


def parity_clauses(variables, rhs: int) -> list[tuple[int, ...]]:
    """Direct CNF for XOR(variables) = rhs: one clause per violating pattern.

    Emits 2^(k-1) clauses of width k; callers keep k small by chunking.
    An empty variable list with rhs=1 yields the empty clause (unsatisfiable).
    """
    k = len(variables)
    if k == 0:
        return [] if rhs == 0 else [()]
    clauses = []
    for pattern in range(1 << k):
        if (pattern.bit_count() & 1) == rhs:
            continue
        clauses.append(
            tuple(-v if (pattern >> j) & 1 else v for j, v in enumerate(variables))
        )
    return clauses


def encode_constraint(
    h: XorHash,
    alpha: CellTarget,
    next_free_var: int,
    chunk_width: int = 4,
) -> tuple[list[tuple[int, ...]], set[int], int]:
    """CNF-encode the constraint ``h(z_1..z_n) = alpha``.

    Each parity row is split into chunks of at most ``chunk_width`` original
    variables, chained through fresh auxiliary parity variables numbered
    from ``next_free_var`` upward.  The auxiliary values are functionally
    determined by the originals, so every original-variable solution extends
    to exactly one full solution; model counts over the originals are
    preserved.

    Returns (clauses, aux_vars, next_free_var_after).
    """
    if alpha.m != h.m:
        raise ValueError("alpha has %d bits, hash has %d rows" % (alpha.m, h.m))
    if next_free_var <= h.n:
        raise ValueError("next_free_var must exceed the hash's variable count")
    if chunk_width < 2:
        raise ValueError("chunk_width must be at least 2")

    clauses: list[tuple[int, ...]] = []
    aux_vars: set[int] = set()
    nfv = next_free_var
    for i, row in enumerate(h.rows):
        rhs = row.offset ^ ((alpha.bits >> i) & 1)
        items = list(row.variables(h.n))
        # Chain: aux = parity(first chunk_width items), repeat until the
        # remainder fits one direct constraint of width <= chunk_width + 1.
        while len(items) > chunk_width + 1:
            aux = nfv
            nfv += 1
            aux_vars.add(aux)
            clauses.extend(parity_clauses(items[:chunk_width] + [aux], 0))
            items = [aux] + items[chunk_width:]
        clauses.extend(parity_clauses(items, rhs))
    return clauses, aux_vars, nfv


def dump_hash(h: XorHash) -> str:
    """Debug listing, one row per line: 'xor <offset> : v_i1 v_i2 ...'."""
    lines = []
    for row in h.rows:
        vs = " ".join(str(v) for v in row.variables(h.n))
        lines.append(("xor %d : %s" % (row.offset, vs)).rstrip())
    return "\n".join(lines)
