"""Portable seeded randomness and integer apportionment.

Every randomized operation in the toolkit (dataset splits, stratified
sampling) draws from the xoshiro256** generator seeded through splitmix64,
so results are reproducible bit-for-bit across runs, platforms, and
reimplementations in other languages.  The exact algorithms are documented
in the README; changing them is a format break.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** 1.0, seeded from a 64-bit integer via splitmix64."""

    def __init__(self, seed: int):
        sm = seed & _MASK64
        state = []
        for _ in range(4):
            sm, word = _splitmix64(sm)
            state.append(word)
        if not any(state):
            state[0] = 1  # the all-zero state is invalid for xoshiro
        self._s = state

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via unbiased rejection sampling."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, iterating from the last index down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """k items without replacement (partial Fisher-Yates, order of selection)."""
        n = len(items)
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} items from {n}")
        pool = list(items)
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


def largest_remainder(total: int, weights: Sequence[float | int | Fraction]) -> list[int]:
    """Apportion `total` into integer parts proportional to `weights`.

    Hamilton / largest-remainder method, computed in exact rational
    arithmetic.  Remainder ties go to the earlier index.
    """
    if total < 0:
        raise ValueError("total must be non-negative")
    if not weights:
        raise ValueError("weights must be non-empty")
    fw = [Fraction(w) for w in weights]
    if any(w < 0 for w in fw):
        raise ValueError("weights must be non-negative")
    s = sum(fw)
    if s <= 0:
        raise ValueError("weights must sum to a positive value")
    exact = [total * w / s for w in fw]
    base = [int(e) for e in exact]
    leftover = total - sum(base)
    by_remainder = sorted(range(len(fw)), key=lambda i: (-(exact[i] - base[i]), i))
    for i in by_remainder[:leftover]:
        base[i] += 1
    return base
