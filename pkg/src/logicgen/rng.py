"""Deterministic PRNG used by every generator.

All instance generation draws randomness from SplitMix64 (Steele, Lea &
Flood's 64-bit mixer over a Weyl sequence with increment 0x9E3779B97F4A7C15).
It is implemented here in pure integer arithmetic so the byte stream is
identical on every platform and Python version, which `random.Random` does
not guarantee for its distribution methods.

Bounded draws use rejection sampling on the raw 64-bit stream, so they are
exactly uniform and consume a deterministic number of outputs for a given
seed.
"""

from __future__ import annotations

from typing import List, Sequence, TypeVar

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    """SplitMix64 generator with the usual integer/sequence helpers."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        threshold = ((1 << 64) // n) * n
        while True:
            v = self.next_u64()
            if v < threshold:
                return v % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b] inclusive."""
        if b < a:
            raise ValueError("randint() requires a <= b")
        return a + self.below(b - a + 1)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]

    def shuffle(self, items: List[T]) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence[T], k: int) -> List[T]:
        """k distinct elements, order randomized (partial Fisher-Yates)."""
        if k > len(seq):
            raise ValueError("sample() larger than population")
        pool = list(seq)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def coin(self) -> bool:
        return bool(self.next_u64() & 1)
