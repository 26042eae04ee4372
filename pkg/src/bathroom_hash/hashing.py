"""64-bit mixing primitives shared by hashing and seeded generation."""

from __future__ import annotations

from typing import NamedTuple

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 finalizer; bijective on 64-bit words."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class HashPair(NamedTuple):
    h1: int  # home-slot hash
    h2: int  # step hash


def derive_hashes(key: int, seed: int) -> HashPair:
    x = (key ^ seed) & MASK64
    return HashPair(mix64(x), mix64(x ^ GOLDEN))
