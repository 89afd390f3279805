"""Seeded pseudorandom primitives for reproducible dataset partitioning.

All shuffling and resampling of corpora goes through SplitMix64 so that a
partition is fully determined by its integer seed and can be replayed in
any language from the algorithm description below (see README, "Random
number generation").
"""

from __future__ import annotations

import hashlib
from typing import Sequence, TypeVar

T = TypeVar("T")

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 64-bit generator.

    next_u64: state += 0x9E3779B97F4A7C15; z = state;
    z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) * 0x94D049BB133111EB;
    return z ^ z>>31 (all arithmetic mod 2^64).
    """

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        """Integer in [0, n) as next_u64() mod n; the modulo bias is part of
        the documented algorithm and is negligible at corpus scale."""
        if n <= 0:
            raise ValueError("randrange requires n >= 1")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates from the last index down to 1."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_with_replacement(self, items: Sequence[T], k: int) -> list[T]:
        return [items[self.randrange(len(items))] for _ in range(k)]

    def sample_without_replacement(self, items: Sequence[T], k: int) -> list[T]:
        if k > len(items):
            raise ValueError("sample larger than population")
        pool = list(items)
        self.shuffle(pool)
        return pool[:k]


def derive_seed(label: str, seed: int) -> int:
    """Stable per-stage seed: first 8 bytes (big-endian) of SHA-256 of
    "{label}|{seed}". Lets one global seed fan out to independent streams."""
    digest = hashlib.sha256(f"{label}|{seed}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
