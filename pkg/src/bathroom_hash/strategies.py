"""Observation-driven probe-sequence generators.

Every strategy follows the same cursor contract: :func:`probe_start` yields the
home slot, then each call to :func:`probe_next` reports what was seen at the
last slot and receives the next one, or ``None`` once ``m`` slots have been
observed. The caller (the table) owns the fallback sweep after that.

Each strategy also offers ``walk(h1, h2, m)``, a generator producing the same
sequence with observations passed in through ``send``. The table uses it on
the hot path; tests hold it equal to the cursor form.

``ElasticProbing`` and ``FunnelProbing`` are simplified stand-ins for the
published elastic and funnel hashing schemes: fixed probe-index regions and
geometric levels respectively, with no key relocation.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import ClassVar, Union

from .errors import ContractViolation, InvalidParams
from .hashing import HashPair


class Observation(enum.Enum):
    OCCUPIED_OTHER = "occupied"
    TOMBSTONE_SEEN = "tombstone"
    MATCH = "match"
    EMPTY_SEEN = "empty"


OCCUPIED_CLASS = frozenset({Observation.OCCUPIED_OTHER, Observation.TOMBSTONE_SEEN})
_OCC = Observation.OCCUPIED_OTHER
_TOMB = Observation.TOMBSTONE_SEEN
_MATCH = Observation.MATCH


class Growth(enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


class Region(enum.Enum):
    A = "A"  # linear
    B = "B"  # double hashing
    C = "C"  # quadratic


@dataclass(frozen=True)
class AdaptiveParams:
    theta: int = 2
    delta: int = 1
    growth: Growth = Growth.ADDITIVE

    def __post_init__(self) -> None:
        if self.theta < 1:
            raise InvalidParams(f"theta must be >= 1, got {self.theta}")
        if self.delta < 1:
            raise InvalidParams(f"delta must be >= 1, got {self.delta}")


@dataclass(frozen=True)
class ElasticParams:
    t1: int = 4
    t2: int = 16

    def __post_init__(self) -> None:
        if not 1 <= self.t1 < self.t2:
            raise InvalidParams(f"need 1 <= t1 < t2, got t1={self.t1}, t2={self.t2}")


@dataclass(frozen=True)
class FunnelParams:
    levels: int = 3
    shrink: float = 0.5
    budget_beta: int = 4

    def __post_init__(self) -> None:
        if self.levels < 2:
            raise InvalidParams(f"levels must be >= 2, got {self.levels}")
        if not 0.0 < self.shrink < 1.0:
            raise InvalidParams(f"shrink must lie in (0, 1), got {self.shrink}")
        if self.budget_beta < 1:
            raise InvalidParams(f"budget_beta must be >= 1, got {self.budget_beta}")


class ProbeState:
    """Mutable cursor for one probe sequence.

    ``probes_made`` counts observations reported so far; ``level`` and
    ``level_probes`` are only meaningful for funnel probing.
    """

    __slots__ = (
        "current_slot", "step_d", "consec_c", "probes_made",
        "level", "level_probes", "home", "base_step", "hashes", "exhausted",
    )

    def __init__(self, home: int, step_d: int, hashes: HashPair, base_step: int | None = None) -> None:
        self.current_slot = home
        self.home = home
        self.step_d = step_d
        self.base_step = step_d if base_step is None else base_step
        self.hashes = hashes
        self.consec_c = 0
        self.probes_made = 0
        self.level = 0
        self.level_probes = 0
        self.exhausted = False

    def copy(self) -> "ProbeState":
        other = ProbeState.__new__(ProbeState)
        for name in self.__slots__:
            setattr(other, name, getattr(self, name))
        return other

    def __repr__(self) -> str:
        return (
            f"ProbeState(slot={self.current_slot}, d={self.step_d}, c={self.consec_c}, "
            f"probes={self.probes_made}, level={self.level})"
        )


def normalize_step(x: int, m: int) -> int:
    """Fold ``x`` into ``[1, m-1]``; every such step is coprime to a prime ``m``."""
    if m <= 2:
        return 1
    return (x - 1) % (m - 1) + 1


def adapt(step: int, count: int, occupied: bool, params: AdaptiveParams, m: int) -> tuple[int, int]:
    """One application of the occupancy feedback rule; returns ``(step, count)``.

    A run of ``theta`` occupied observations grows the step and resets the
    run. A vacancy that does not end the search resets the run and shrinks
    the step, never below 1.
    """
    if occupied:
        count += 1
        if count >= params.theta:
            if params.growth is Growth.ADDITIVE:
                step = normalize_step(step + params.delta, m)
            else:
                step = normalize_step(2 * step, m)
            count = 0
        return step, count
    if params.growth is Growth.ADDITIVE:
        step = max(1, step - params.delta)
    else:
        step = max(1, step // 2)
    return step, 0


def adaptive_update(state: ProbeState, observation: Observation, params: AdaptiveParams, m: int) -> ProbeState:
    """Pure form of the step/counter update, for inspection and tests."""
    out = state.copy()
    if observation is Observation.MATCH:
        return out
    out.step_d, out.consec_c = adapt(
        state.step_d, state.consec_c, observation in OCCUPIED_CLASS, params, m
    )
    return out


def elastic_region(probe_index: int, params: ElasticParams) -> Region:
    if probe_index < 1:
        raise ValueError(f"probe_index must be >= 1, got {probe_index}")
    if probe_index <= params.t1:
        return Region.A
    if probe_index <= params.t2:
        return Region.B
    return Region.C


@functools.lru_cache(maxsize=256)
def funnel_levels(m: int, params: FunnelParams) -> tuple[tuple[int, int], ...]:
    """Geometric level layout as ``(offset, length)`` pairs covering ``[0, m)``.

    Each non-final level is ``floor(previous * shrink)`` long (at least 1),
    starting from ``floor(m * shrink)``; the final level takes the remainder.
    """
    if m < params.levels:
        raise InvalidParams(f"table of {m} slots cannot hold {params.levels} levels")
    lengths = []
    prev = m
    for i in range(params.levels - 1):
        length = int(prev * params.shrink)
        if i > 0:
            length = max(1, length)
        if length < 1:
            raise InvalidParams(f"level {i} would be empty for m={m}, shrink={params.shrink}")
        lengths.append(length)
        prev = length
    rest = m - sum(lengths)
    if rest < 1:
        raise InvalidParams(f"final level would be empty for m={m}, shrink={params.shrink}")
    lengths.append(rest)
    out = []
    offset = 0
    for length in lengths:
        out.append((offset, length))
        offset += length
    return tuple(out)


def _step_from_hash(h2: int, size: int) -> int:
    return 1 + h2 % (size - 1) if size > 1 else 1


@dataclass(frozen=True)
class RandomProbing:
    """Double hashing: a constant per-key step derived from the second hash."""

    name: ClassVar[str] = "random"
    metadata_bytes: ClassVar[int] = 0

    def validate(self, m: int) -> None:
        pass

    def start(self, hp: HashPair, m: int) -> ProbeState:
        return ProbeState(hp.h1 % m, _step_from_hash(hp.h2, m), hp)

    def advance(self, state: ProbeState, observation: Observation, m: int) -> int:
        return (state.current_slot + state.step_d) % m

    def home(self, h1: int, h2: int, m: int) -> int:
        return h1 % m

    def walk(self, h1: int, h2: int, m: int):
        slot = h1 % m
        step = 1 + h2 % (m - 1)
        for _ in range(m):
            yield slot
            slot = (slot + step) % m


@dataclass(frozen=True)
class BathroomProbing:
    """Double hashing whose step grows after ``theta`` consecutive occupied slots."""

    params: AdaptiveParams = field(default_factory=AdaptiveParams)
    name: ClassVar[str] = "bathroom"
    metadata_bytes: ClassVar[int] = 32

    def validate(self, m: int) -> None:
        pass

    def start(self, hp: HashPair, m: int) -> ProbeState:
        return ProbeState(hp.h1 % m, _step_from_hash(hp.h2, m), hp)

    def advance(self, state: ProbeState, observation: Observation, m: int) -> int:
        if observation is not Observation.MATCH:
            state.step_d, state.consec_c = adapt(
                state.step_d, state.consec_c, observation in OCCUPIED_CLASS, self.params, m
            )
        return (state.current_slot + state.step_d) % m

    def home(self, h1: int, h2: int, m: int) -> int:
        return h1 % m

    def walk(self, h1: int, h2: int, m: int):
        params = self.params
        theta, delta = params.theta, params.delta
        additive = params.growth is Growth.ADDITIVE
        slot = h1 % m
        step = 1 + h2 % (m - 1)
        count = 0
        for _ in range(m):
            obs = yield slot
            if obs is _OCC or obs is _TOMB:
                count += 1
                if count >= theta:
                    step = step + delta if additive else 2 * step
                    if step >= m:
                        step = normalize_step(step, m)
                    count = 0
            elif obs is not _MATCH:
                step, count = adapt(step, count, False, params, m)
            slot = (slot + step) % m


@dataclass(frozen=True)
class ElasticProbing:
    """Linear, then double-hash, then quadratic probing across fixed index thresholds.

    After observing probe number ``k`` (1-based) the step is 1 in region A,
    the per-key hash step in region B, and ``2(k - t2) - 1`` in region C, so
    region-C slots sit at square offsets from the first region-C slot.
    """

    params: ElasticParams = field(default_factory=ElasticParams)
    name: ClassVar[str] = "elastic"
    metadata_bytes: ClassVar[int] = 24

    def validate(self, m: int) -> None:
        pass

    def start(self, hp: HashPair, m: int) -> ProbeState:
        return ProbeState(hp.h1 % m, 1, hp, base_step=_step_from_hash(hp.h2, m))

    def advance(self, state: ProbeState, observation: Observation, m: int) -> int:
        k = state.probes_made
        if k <= self.params.t1:
            step = 1
        elif k <= self.params.t2:
            step = state.base_step
        else:
            step = normalize_step(2 * (k - self.params.t2) - 1, m)
        state.step_d = step
        return (state.current_slot + state.step_d) % m

    def home(self, h1: int, h2: int, m: int) -> int:
        return h1 % m

    def walk(self, h1: int, h2: int, m: int):
        t1, t2 = self.params.t1, self.params.t2
        slot = h1 % m
        d0 = 1 + h2 % (m - 1)
        for k in range(1, m + 1):
            yield slot
            if k <= t1:
                slot = (slot + 1) % m
            elif k <= t2:
                slot = (slot + d0) % m
            else:
                slot = (slot + normalize_step(2 * (k - t2) - 1, m)) % m


@dataclass(frozen=True)
class FunnelProbing:
    """Geometric levels probed in turn: ``budget_beta`` double-hash probes per
    level, then on to the next level's home; the last level is scanned linearly."""

    params: FunnelParams = field(default_factory=FunnelParams)
    name: ClassVar[str] = "funnel"

    @property
    def metadata_bytes(self) -> int:
        return 16 + 16 * self.params.levels

    def validate(self, m: int) -> None:
        funnel_levels(m, self.params)

    def _enter(self, state: ProbeState, level: int, m: int) -> int:
        offset, length = funnel_levels(m, self.params)[level]
        h1, h2 = state.hashes
        state.level = level
        state.level_probes = 0
        if level == self.params.levels - 1:
            state.step_d = 1
        else:
            state.step_d = _step_from_hash(h2, length)
        return offset + (h1 + level * h2) % length

    def start(self, hp: HashPair, m: int) -> ProbeState:
        state = ProbeState(0, 1, hp)
        state.current_slot = state.home = self._enter(state, 0, m)
        state.base_step = state.step_d
        return state

    def advance(self, state: ProbeState, observation: Observation, m: int) -> int:
        state.level_probes += 1
        if state.level < self.params.levels - 1 and state.level_probes >= self.params.budget_beta:
            return self._enter(state, state.level + 1, m)
        offset, length = funnel_levels(m, self.params)[state.level]
        return offset + (state.current_slot - offset + state.step_d) % length

    def home(self, h1: int, h2: int, m: int) -> int:
        offset, length = funnel_levels(m, self.params)[0]
        return offset + h1 % length

    def walk(self, h1: int, h2: int, m: int):
        layout = funnel_levels(m, self.params)
        last = len(layout) - 1
        beta = self.params.budget_beta
        remaining = m
        for level, (offset, length) in enumerate(layout):
            rel = (h1 + level * h2) % length
            step = 1 if level == last else _step_from_hash(h2, length)
            quota = remaining if level == last else min(beta, remaining)
            for _ in range(quota):
                yield offset + rel
                rel = (rel + step) % length
            remaining -= quota
            if not remaining:
                return


StrategyKind = Union[RandomProbing, BathroomProbing, ElasticProbing, FunnelProbing]

STRATEGY_NAMES = ("random", "bathroom", "elastic", "funnel")


def make_strategy(
    name: str,
    adaptive: AdaptiveParams | None = None,
    elastic: ElasticParams | None = None,
    funnel: FunnelParams | None = None,
) -> StrategyKind:
    if name == "random":
        return RandomProbing()
    if name == "bathroom":
        return BathroomProbing(adaptive or AdaptiveParams())
    if name == "elastic":
        return ElasticProbing(elastic or ElasticParams())
    if name == "funnel":
        return FunnelProbing(funnel or FunnelParams())
    raise InvalidParams(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGY_NAMES)}")


def probe_start(kind: StrategyKind, hp: HashPair, m: int) -> tuple[ProbeState, int]:
    state = kind.start(hp, m)
    return state, state.current_slot


def probe_next(kind: StrategyKind, state: ProbeState, observation: Observation, m: int) -> int | None:
    """Report the observation at the current slot; return the next slot or ``None`` when exhausted."""
    if state.exhausted:
        raise ContractViolation("probe_next called on an exhausted probe state")
    state.probes_made += 1
    if state.probes_made >= m:
        state.exhausted = True
        return None
    slot = kind.advance(state, observation, m)
    state.current_slot = slot
    return slot

