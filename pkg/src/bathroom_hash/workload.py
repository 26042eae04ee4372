"""Seeded synthetic datasets and trial plans.

Keys are uniform 64-bit words drawn from a splitmix64 stream, so a plan is a
pure function of its :class:`TrialSpec`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

from .errors import InvalidSpec
from .hashing import GOLDEN, MASK64, mix64
from .primes import is_prime, next_prime

# tolerance for float products like 0.29 * 100 landing just under an integer
_EPS = 1e-9


def splitmix_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns ``(new_state, output)``."""
    state = (state + GOLDEN) & MASK64
    return state, mix64(state)


class SplitMix64:
    """Iterator over a splitmix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        self.state, out = splitmix_next(self.state)
        return out

    def below(self, bound: int) -> int:
        """Integer in ``[0, bound)``; modulo bias is negligible for small bounds."""
        return next(self) % bound

    def unit(self) -> float:
        """Float in ``[0, 1)`` from the top 53 bits."""
        return (next(self) >> 11) * (1.0 / (1 << 53))


def gen_unique_keys(n: int, seed: int) -> list[int]:
    """``n`` distinct keys from the splitmix64 stream of ``seed``; repeats are redrawn."""
    rng = SplitMix64(seed)
    seen: set[int] = set()
    keys: list[int] = []
    while len(keys) < n:
        k = next(rng)
        if k not in seen:
            seen.add(k)
            keys.append(k)
    return keys


class Mode(enum.Enum):
    FIXED_N = "fixed-n"  # n given, m = next_prime(ceil(n / alpha))
    FIXED_M = "fixed-m"  # m given, n = floor(alpha * m)


@dataclass(frozen=True)
class TrialSpec:
    n_entries: int
    target_alpha: float
    mode: Mode = Mode.FIXED_N
    seed: int = 0
    unsuccessful_fraction: float = 0.0
    capacity: int | None = None  # FIXED_M only


@dataclass(frozen=True)
class TrialPlan:
    capacity_m: int
    keys: tuple[int, ...]
    probe_keys: tuple[int, ...]  # present keys first, then absent ones
    n_absent: int

    @property
    def achieved_alpha(self) -> float:
        return len(self.keys) / self.capacity_m


def derive_capacity(spec: TrialSpec) -> tuple[int, int]:
    """Return ``(m, n)`` for a spec, validating it."""
    a = spec.target_alpha
    if not (0.0 < a <= 1.0) or math.isnan(a):
        raise InvalidSpec(f"target_alpha must lie in (0, 1], got {a!r}")
    if not 0.0 <= spec.unsuccessful_fraction <= 1.0:
        raise InvalidSpec(f"unsuccessful_fraction must lie in [0, 1], got {spec.unsuccessful_fraction!r}")
    if spec.mode is Mode.FIXED_N:
        if spec.n_entries < 1:
            raise InvalidSpec("n_entries must be positive")
        m = next_prime(max(2, math.ceil(spec.n_entries / a - _EPS)))
        return m, spec.n_entries
    if spec.capacity is None:
        raise InvalidSpec("FIXED_M mode needs a capacity")
    m = spec.capacity
    if m < 2 or not is_prime(m):
        raise InvalidSpec(f"capacity {m} is not a prime >= 2")
    return m, math.floor(a * m + _EPS)


def build_trial(spec: TrialSpec) -> TrialPlan:
    m, n = derive_capacity(spec)
    n_absent = math.floor(spec.unsuccessful_fraction * n + _EPS)
    # one stream: the first n distinct draws are inserted, the next n_absent are absent
    pool = gen_unique_keys(n + n_absent, spec.seed)
    keys = tuple(pool[:n])
    return TrialPlan(m, keys, keys + tuple(pool[n:]), n_absent)
