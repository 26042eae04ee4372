"""Fixed-capacity open-addressing table with a pluggable probe strategy.

A probe path is the strategy phase (exactly ``m`` observed slots) followed by
a linear sweep over all ``m`` slots starting at ``(home + 1) % m``, so every
operation observes at most ``2m`` slots and always finds an existing key or
a free slot.

Deleted slots become tombstones. Tombstones never revert to empty and are
reported to the strategy exactly like occupied slots, which keeps a lookup's
probe path identical to the one its insert followed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import partial
from typing import Iterator, NamedTuple

from .errors import NonPrimeCapacity
from .hashing import GOLDEN, MASK64, mix64
from .primes import is_prime
from .strategies import Observation, RandomProbing, StrategyKind

SLOT_RECORD_BYTES = 17  # 8 key + 8 value + 1 state tag

_OCC = Observation.OCCUPIED_OTHER
_TOMB_OBS = Observation.TOMBSTONE_SEEN


class _Tombstone:
    __slots__ = ()

    def __repr__(self) -> str:
        return "<tombstone>"


TOMBSTONE = _Tombstone()


class SlotState(enum.Enum):
    EMPTY = "empty"
    OCCUPIED = "occupied"
    TOMBSTONE = "tombstone"


class InsertStatus(enum.Enum):
    INSERTED = "inserted"
    UPDATED = "updated"
    TABLE_FULL = "table_full"


class InsertOutcome(NamedTuple):
    status: InsertStatus
    probes: int


_INSERTED = InsertStatus.INSERTED
_UPDATED = InsertStatus.UPDATED


class LookupOutcome(NamedTuple):
    found: bool
    value: int | None
    probes: int


class DeleteOutcome(NamedTuple):
    deleted: bool
    probes: int


# skips NamedTuple's Python-level __new__ on the hot path
_lookup_outcome = partial(tuple.__new__, LookupOutcome)
_insert_outcome = partial(tuple.__new__, InsertOutcome)


class ProbeTrace(NamedTuple):
    slots_visited: list[int]
    phase_boundary: int | None  # index into slots_visited where the sweep began


@dataclass(frozen=True)
class TableConfig:
    capacity_m: int
    strategy: StrategyKind = RandomProbing()
    hash_seed: int = 0


class Table:
    """Open-addressing map from 64-bit keys to 64-bit values.

    >>> t = Table(TableConfig(7))
    >>> t.insert(10, 20)
    InsertOutcome(status=<InsertStatus.INSERTED: 'inserted'>, probes=1)
    >>> t.lookup(10).value
    20
    """

    def __init__(self, config: TableConfig) -> None:
        m = config.capacity_m
        if m < 2 or not is_prime(m):
            raise NonPrimeCapacity(f"capacity {m} is not a prime >= 2")
        config.strategy.validate(m)
        self.config = config
        self.capacity = m
        self._strategy = config.strategy
        self._seed = config.hash_seed & MASK64
        self._keys: list = [None] * m  # None = empty, TOMBSTONE, or the key
        self._values: list = [None] * m
        self.occupied_count = 0
        self.tombstone_count = 0

    # -- probing --------------------------------------------------------

    def _search(self, key: int) -> tuple[int, int, int, int]:
        """Walk the probe path for ``key``.

        Returns ``(key_slot, empty_slot, first_tombstone, probes)`` with -1 for
        anything not encountered. The walk stops at the key or the first empty slot.
        """
        keys = self._keys
        m = self.capacity
        # derive_hashes, inlined: this is the hot path of every operation
        x = key ^ self._seed
        h1 = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        h1 = ((h1 ^ (h1 >> 27)) * 0x94D049BB133111EB) & MASK64
        x ^= GOLDEN
        h2 = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        h2 = ((h2 ^ (h2 >> 27)) * 0x94D049BB133111EB) & MASK64
        h1 ^= h1 >> 31
        h2 ^= h2 >> 31
        # most searches end at the home slot; only build the walk past it
        slot = home = self._strategy.home(h1, h2, m)
        k = keys[slot]
        if k is None:
            return -1, slot, -1, 1
        if k == key:
            return slot, -1, -1, 1
        walk = self._strategy.walk(h1, h2, m)
        send = walk.send
        next(walk)
        first_tomb = -1
        probes = 1
        sweep = 0  # 0 while in the strategy phase, else sweep offset from home
        while True:
            if k is TOMBSTONE:
                if first_tomb < 0:
                    first_tomb = slot
                obs = _TOMB_OBS
            else:
                obs = _OCC
            if sweep:
                sweep += 1
            else:
                try:
                    slot = send(obs)
                except StopIteration:
                    sweep = 1
            if sweep:
                if sweep > m:
                    break
                slot = (home + sweep) % m
            probes += 1
            k = keys[slot]
            if k is None:
                return -1, slot, first_tomb, probes
            if k == key:
                return slot, -1, first_tomb, probes
        assert probes <= 2 * m, f"probe budget exceeded: {probes} > {2 * m}"
        return -1, -1, first_tomb, probes

    # -- map operations -------------------------------------------------

    def insert(self, key: int, value: int) -> InsertOutcome:
        key &= MASK64
        found, empty, tomb, probes = self._search(key)
        if found >= 0:
            self._values[found] = value
            return _insert_outcome((_UPDATED, probes))
        # key confirmed absent along the whole path: reuse the earliest tombstone
        if tomb >= 0:
            target = tomb
            self.tombstone_count -= 1
        elif empty >= 0:
            target = empty
        else:
            return InsertOutcome(InsertStatus.TABLE_FULL, probes)
        self._keys[target] = key
        self._values[target] = value
        self.occupied_count += 1
        return _insert_outcome((_INSERTED, probes))

    def lookup(self, key: int) -> LookupOutcome:
        found, _, _, probes = self._search(key & MASK64)
        if found >= 0:
            return _lookup_outcome((True, self._values[found], probes))
        return _lookup_outcome((False, None, probes))

    def delete(self, key: int) -> DeleteOutcome:
        found, _, _, probes = self._search(key & MASK64)
        if found < 0:
            return DeleteOutcome(False, probes)
        self._keys[found] = TOMBSTONE
        self._values[found] = None
        self.occupied_count -= 1
        self.tombstone_count += 1
        return DeleteOutcome(True, probes)

    def probe_trace(self, key: int) -> ProbeTrace:
        """Slots a lookup of ``key`` would observe, without touching the table."""
        key &= MASK64
        keys = self._keys
        m = self.capacity
        x = key ^ self._seed
        walk = self._strategy.walk(mix64(x), mix64(x ^ GOLDEN), m)
        visited = []
        slot = home = next(walk)
        boundary = None
        while True:
            visited.append(slot)
            k = keys[slot]
            if k is None or k == key:
                break
            if boundary is None:
                try:
                    slot = walk.send(_TOMB_OBS if k is TOMBSTONE else _OCC)
                    continue
                except StopIteration:
                    boundary = len(visited)
            sweep = len(visited) - boundary + 1
            if sweep > m:
                break
            slot = (home + sweep) % m
        return ProbeTrace(visited, boundary)

    # -- introspection --------------------------------------------------

    @property
    def load_factor(self) -> float:
        return self.occupied_count / self.capacity

    def memory_footprint(self) -> int:
        """Accounting value in bytes: fixed per-slot record plus strategy metadata."""
        return self.capacity * SLOT_RECORD_BYTES + self._strategy.metadata_bytes

    def slot(self, index: int) -> tuple[SlotState, int | None, int | None]:
        k = self._keys[index]
        if k is None:
            return SlotState.EMPTY, None, None
        if k is TOMBSTONE:
            return SlotState.TOMBSTONE, None, None
        return SlotState.OCCUPIED, k, self._values[index]

    def recount(self) -> tuple[int, int, int]:
        """Recount ``(occupied, tombstone, empty)`` slots from scratch."""
        empty = sum(1 for k in self._keys if k is None)
        tomb = sum(1 for k in self._keys if k is TOMBSTONE)
        return self.capacity - empty - tomb, tomb, empty

    def items(self) -> Iterator[tuple[int, int]]:
        for k, v in zip(self._keys, self._values):
            if k is not None and k is not TOMBSTONE:
                yield k, v

    def rehash(self) -> "Table":
        """Fresh table with the same config holding only the live entries."""
        fresh = type(self)(self.config)
        for k, v in self.items():
            fresh.insert(k, v)
        return fresh

    def __len__(self) -> int:
        return self.occupied_count

    def __contains__(self, key: int) -> bool:
        return self.lookup(key).found

    def __repr__(self) -> str:
        return (
            f"Table(m={self.capacity}, strategy={self._strategy.name}, "
            f"occupied={self.occupied_count}, tombstones={self.tombstone_count})"
        )


def new_table(config: TableConfig) -> Table:
    return Table(config)


def load_factor(table: Table) -> float:
    return table.load_factor


def memory_footprint(table: Table) -> int:
    return table.memory_footprint()


def probe_trace(table: Table, key: int) -> ProbeTrace:
    return table.probe_trace(key)
