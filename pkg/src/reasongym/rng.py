"""SplitMix64 random streams.

Every session draws from its own stream, seeded from the integer seed, a
digest of the game name and a stream counter, so that instance generation
and in-game randomness are reproducible bit for bit.
"""

from __future__ import annotations

import hashlib
from typing import MutableSequence, Sequence, TypeVar

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


def name_digest(name: str) -> int:
    """First 8 bytes of SHA-256 of the UTF-8 name, big-endian."""
    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class RngStream:
    """A SplitMix64 generator whose whole state is one 64-bit word."""

    __slots__ = ("state",)

    def __init__(self, state: int = 0) -> None:
        self.state = state & MASK64

    @classmethod
    def derive(cls, seed: int, name: str, counter: int = 0) -> "RngStream":
        word = (seed & MASK64) ^ name_digest(name) ^ ((counter * GOLDEN_GAMMA) & MASK64)
        # one extra mixing round decorrelates neighbouring seeds
        return cls(mix64(word))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        return lo + self.randbelow(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.randbelow(len(seq))]

    def shuffle(self, seq: MutableSequence) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randbelow(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def copy(self) -> "RngStream":
        return RngStream(self.state)

    def __repr__(self) -> str:
        return f"RngStream(state={self.state:#018x})"
