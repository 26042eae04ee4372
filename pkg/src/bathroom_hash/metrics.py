"""Probe-count aggregation: mean, population stddev, worst case, p99, histogram.

Aggregates are kept as exact integers (count, sum, sum of squares, histogram),
so merging recorders is exact and order-independent.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable


class OpKind(enum.Enum):
    INSERT = "Insert"
    LOOKUP_HIT = "LookupHit"
    LOOKUP_MISS = "LookupMiss"
    DELETE = "Delete"


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    stddev: float
    max: int
    p99: int


EMPTY_STATS = SummaryStats(0, 0.0, 0.0, 0, 0)


@dataclass
class _Aggregate:
    count: int = 0
    total: int = 0
    total_sq: int = 0
    max: int = 0
    hist: Counter = field(default_factory=Counter)

    def add_counts(self, hist: Counter) -> None:
        for p, n in hist.items():
            self.count += n
            self.total += p * n
            self.total_sq += p * p * n
            if p > self.max:
                self.max = p
        self.hist.update(hist)


class Recorder:
    """Per-operation-kind probe counts."""

    def __init__(self) -> None:
        self._aggs: dict[OpKind, _Aggregate] = {}

    def _agg(self, kind: OpKind) -> _Aggregate:
        agg = self._aggs.get(kind)
        if agg is None:
            agg = self._aggs[kind] = _Aggregate()
        return agg

    def record(self, kind: OpKind, probes: int) -> "Recorder":
        if probes < 1:
            raise ValueError(f"probe count must be >= 1, got {probes}")
        self._agg(kind).add_counts(Counter({probes: 1}))
        return self

    def record_many(self, kind: OpKind, probes: Iterable[int]) -> "Recorder":
        hist = Counter(probes)
        if hist and min(hist) < 1:
            raise ValueError("probe counts must be >= 1")
        self._agg(kind).add_counts(hist)
        return self

    def kinds(self) -> list[OpKind]:
        return [k for k in OpKind if k in self._aggs and self._aggs[k].count]

    def count(self, kind: OpKind) -> int:
        agg = self._aggs.get(kind)
        return agg.count if agg else 0

    def total(self, kind: OpKind) -> int:
        agg = self._aggs.get(kind)
        return agg.total if agg else 0

    def summarize(self, kind: OpKind) -> SummaryStats:
        agg = self._aggs.get(kind)
        if agg is None or agg.count == 0:
            return EMPTY_STATS
        n = agg.count
        mean = agg.total / n
        # n*sum(x^2) - sum(x)^2 is exact in integers, so no cancellation
        var_num = n * agg.total_sq - agg.total * agg.total
        stddev = math.sqrt(var_num) / n
        return SummaryStats(n, mean, stddev, agg.max, _nearest_rank(agg.hist, n, 99))

    def histogram(self, kind: OpKind) -> list[tuple[int, int]]:
        agg = self._aggs.get(kind)
        if agg is None:
            return []
        return sorted(agg.hist.items())

    def merge(self, other: "Recorder") -> "Recorder":
        """New recorder equal to recording both streams into one."""
        out = Recorder()
        for src in (self, other):
            for kind, agg in src._aggs.items():
                out._agg(kind).add_counts(agg.hist)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Recorder):
            return NotImplemented
        return all(
            self.histogram(k) == other.histogram(k) and self.summarize(k) == other.summarize(k)
            for k in OpKind
        )


def _nearest_rank(hist: Counter, n: int, percent: int) -> int:
    rank = max(1, -(-percent * n // 100))
    seen = 0
    for p in sorted(hist):
        seen += hist[p]
        if seen >= rank:
            return p
    raise AssertionError("histogram shorter than its count")


def record(recorder: Recorder, kind: OpKind, probes: int) -> Recorder:
    return recorder.record(kind, probes)


def summarize(recorder: Recorder, kind: OpKind) -> SummaryStats:
    return recorder.summarize(kind)


def merge(a: Recorder, b: Recorder) -> Recorder:
    return a.merge(b)


def histogram(recorder: Recorder, kind: OpKind) -> list[tuple[int, int]]:
    return recorder.histogram(kind)
