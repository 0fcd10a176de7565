"""Portable seeded streams: SplitMix64 seeding feeding xorshift64*.

Every stream is keyed by a tuple of integers (for example seed, sample,
trial), so any implementation of the two published generators reproduces
the same corpus regardless of evaluation order.
"""
from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
XORSHIFT_MULT = 0x2545F4914F6CDD1D


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step; returns (output, next state)."""
    state = (state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31), state


class Stream:
    """xorshift64* generator whose state is derived from ``keys`` via SplitMix64."""

    def __init__(self, *keys: int):
        mix = 0
        for key in keys:
            out, _ = splitmix64((mix ^ (int(key) & MASK64)) & MASK64)
            mix = out
        self.state = mix or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * XORSHIFT_MULT) & MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        """Box–Muller, consuming two uniforms per value."""
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return mean + std * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def below(self, n: int) -> int:
        """Integer in [0, n) by rejection, so there is no modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def sample(self, n: int, k: int) -> list[int]:
        """``k`` distinct integers from range(n) by a partial Fisher–Yates shuffle."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} of {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
