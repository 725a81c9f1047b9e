"""Seedable source of independent uniform random bits.

Counter-mode generator in the splitmix64 family: the k-th 64-bit block is a
bijective mix of ``seed + k * GAMMA``, so identical seeds give identical bit
streams on every platform and Python version, and per-task substreams can be
derived without sharing state.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """Finalizer of splitmix64; a 64-bit bijection with good avalanche."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def derive_subseed(master_seed: int, index: int) -> int:
    """Mix a master seed with a task index into an independent substream seed."""
    return mix64((master_seed & _MASK64) ^ mix64((index + 1) * _GAMMA))


class RandomSource:
    """Uniform random bits from a 64-bit seed; same seed, same stream."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._counter = 0
        self._buf = 0
        self._avail = 0

    def _next_block(self) -> int:
        self._counter += 1
        return mix64((self.seed + self._counter * _GAMMA) & _MASK64)

    def bits(self, k: int) -> int:
        """Next k bits packed into an int (bit 0 drawn first)."""
        if k < 0:
            raise ValueError("bit count must be nonnegative")
        while self._avail < k:
            self._buf |= self._next_block() << self._avail
            self._avail += 64
        out = self._buf & ((1 << k) - 1)
        self._buf >>= k
        self._avail -= k
        return out

    def bit(self) -> int:
        return self.bits(1)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        k = (n - 1).bit_length()
        while True:
            r = self.bits(k)
            if r < n:
                return r

    def spawn(self, index: int) -> "RandomSource":
        """Independent substream for task ``index``; deterministic in (seed, index)."""
        return RandomSource(derive_subseed(self.seed, index))
