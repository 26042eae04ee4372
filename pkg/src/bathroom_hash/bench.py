"""Load-factor sweep: build each trial's table, insert, look up, record probes.

One work unit is an ``(alpha index, trial)`` pair. Its plan (keys, capacity)
is shared by every strategy so the strategies see identical workloads. Units
are independent and may run in worker processes; results are reassembled in
plan order, so the CSV bytes do not depend on scheduling (``wall_nanos`` aside).
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .hashing import MASK64, mix64
from .metrics import OpKind, Recorder
from .strategies import (
    STRATEGY_NAMES, AdaptiveParams, ElasticParams, FunnelParams, Growth, StrategyKind, make_strategy,
)
from .table import Table, TableConfig
from .workload import Mode, TrialSpec, build_trial, derive_capacity

DEFAULT_GRID = tuple(round(0.10 + 0.05 * i, 2) for i in range(18))

RESULTS_HEADER = (
    "strategy", "table_size", "target_alpha", "achieved_alpha", "trial", "seed", "op_kind", "ops",
    "mean_probes", "stddev_probes", "max_probes", "p99_probes", "mem_bytes", "wall_nanos",
)
HIST_HEADER = ("strategy", "target_alpha", "op_kind", "probes", "count")


@dataclass(frozen=True)
class BenchConfig:
    strategies: tuple[str, ...] = STRATEGY_NAMES
    n_entries: int = 10000
    load_factors: tuple[float, ...] = DEFAULT_GRID
    trials: int = 100
    seed: int = 42
    mode: Mode = Mode.FIXED_N
    capacity: int | None = None
    unsuccessful_fraction: float = 0.0
    adaptive: AdaptiveParams = field(default_factory=AdaptiveParams)
    elastic: ElasticParams = field(default_factory=ElasticParams)
    funnel: FunnelParams = field(default_factory=FunnelParams)
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        for name in self.strategies:
            if name not in STRATEGY_NAMES:
                raise ValueError(f"unknown strategy {name!r}")
        if not self.load_factors:
            raise ValueError("load factor grid is empty")
        for a in self.load_factors:
            if not 0.0 < a <= 1.0:
                raise ValueError(f"load factor {a} outside (0, 1]")
        if not 0.0 <= self.unsuccessful_fraction <= 1.0:
            raise ValueError("unsuccessful fraction outside [0, 1]")
        if self.n_entries < 1:
            raise ValueError("entries must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        # raises on a bad capacity or alpha
        for a in self.load_factors:
            derive_capacity(self.trial_spec(a, 0))

    def strategy(self, name: str) -> StrategyKind:
        return make_strategy(name, self.adaptive, self.elastic, self.funnel)

    def trial_spec(self, alpha: float, seed: int) -> TrialSpec:
        return TrialSpec(
            self.n_entries, alpha, self.mode, seed, self.unsuccessful_fraction, self.capacity
        )

    def op_kinds(self) -> tuple[OpKind, ...]:
        if self.unsuccessful_fraction > 0:
            return (OpKind.INSERT, OpKind.LOOKUP_HIT, OpKind.LOOKUP_MISS)
        return (OpKind.INSERT, OpKind.LOOKUP_HIT)


def trial_seed(master: int, alpha_index: int, trial: int) -> int:
    return (master ^ mix64(trial ^ (alpha_index << 32))) & MASK64


def work_units(config: BenchConfig) -> list[tuple[int, int]]:
    return [(ai, t) for ai in range(len(config.load_factors)) for t in range(config.trials)]


def expected_rows(config: BenchConfig) -> int:
    return len(config.strategies) * len(work_units(config)) * len(config.op_kinds())


@dataclass
class UnitResult:
    alpha_index: int
    trial: int
    rows: list[tuple]  # in strategy order, then op kind order
    recorders: dict[str, Recorder]


def run_unit(config: BenchConfig, alpha_index: int, trial: int) -> UnitResult:
    alpha = config.load_factors[alpha_index]
    seed = trial_seed(config.seed, alpha_index, trial)
    plan = build_trial(config.trial_spec(alpha, seed))
    n_present = len(plan.keys)
    hits = plan.probe_keys[:n_present]
    misses = plan.probe_keys[n_present:]
    rows = []
    recorders = {}
    for name in config.strategies:
        table = Table(TableConfig(plan.capacity_m, config.strategy(name), mix64(seed)))
        rec = Recorder()
        walls = {}

        insert = table.insert
        t0 = time.perf_counter_ns()
        probes = [insert(k, k).probes for k in plan.keys]
        walls[OpKind.INSERT] = time.perf_counter_ns() - t0
        rec.record_many(OpKind.INSERT, probes)
        if table.occupied_count != n_present:
            raise RuntimeError(f"{name}: only {table.occupied_count}/{n_present} keys stored")

        lookup = table.lookup
        t0 = time.perf_counter_ns()
        outcomes = [lookup(k) for k in hits]
        walls[OpKind.LOOKUP_HIT] = time.perf_counter_ns() - t0
        if not all(o.found for o in outcomes):
            raise RuntimeError(f"{name}: a stored key was not found")
        rec.record_many(OpKind.LOOKUP_HIT, [o.probes for o in outcomes])

        if OpKind.LOOKUP_MISS in config.op_kinds():
            t0 = time.perf_counter_ns()
            outcomes = [lookup(k) for k in misses]
            walls[OpKind.LOOKUP_MISS] = time.perf_counter_ns() - t0
            if any(o.found for o in outcomes):
                raise RuntimeError(f"{name}: an absent key was reported present")
            rec.record_many(OpKind.LOOKUP_MISS, [o.probes for o in outcomes])

        for kind in config.op_kinds():
            s = rec.summarize(kind)
            rows.append((
                name, plan.capacity_m, alpha, table.load_factor, trial, seed, kind.value, s.count,
                s.mean, s.stddev, s.max, s.p99, table.memory_footprint(), walls[kind],
            ))
        recorders[name] = rec
    return UnitResult(alpha_index, trial, rows, recorders)


def _run_unit_packed(args):
    return run_unit(*args)


def run_bench(config: BenchConfig) -> tuple[list[tuple], dict[tuple[str, float], Recorder]]:
    """All result rows in plan order, plus per ``(strategy, alpha)`` merged recorders."""
    units = work_units(config)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_unit_packed, [(config, a, t) for a, t in units], chunksize=4))
    else:
        results = [run_unit(config, a, t) for a, t in units]
    rows: list[tuple] = []
    merged: dict[tuple[str, float], Recorder] = {}
    by_strategy: dict[str, list[tuple]] = {name: [] for name in config.strategies}
    for res in results:
        for row in res.rows:
            by_strategy[row[0]].append(row)
        alpha = config.load_factors[res.alpha_index]
        for name, rec in res.recorders.items():
            key = (name, alpha)
            merged[key] = merged[key].merge(rec) if key in merged else rec
    for name in config.strategies:
        rows.extend(by_strategy[name])
    return rows, merged


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_results(rows: Iterable[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULTS_HEADER)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def format_histograms(config: BenchConfig, merged: dict[tuple[str, float], Recorder]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HIST_HEADER)
    for name in config.strategies:
        for alpha in config.load_factors:
            rec = merged.get((name, alpha))
            if rec is None:
                continue
            for kind in config.op_kinds():
                for probes, count in rec.histogram(kind):
                    w.writerow([name, _fmt(alpha), kind.value, probes, count])
    return buf.getvalue()


@dataclass(frozen=True)
class ComparisonLine:
    alpha: float
    bathroom: float
    random: float

    @property
    def bathroom_lower(self) -> bool:
        return self.bathroom < self.random


def compare_strategies(
    rows: Sequence[tuple], low: float = 0.3, high: float = 0.7, op_kind: str = OpKind.LOOKUP_HIT.value
) -> list[ComparisonLine]:
    """Per-alpha mean over trials of ``mean_probes`` for bathroom vs random."""
    sums: dict[tuple[str, float], list[float]] = {}
    for row in rows:
        name, alpha, kind, mean = row[0], row[2], row[6], row[8]
        if kind != op_kind or name not in ("bathroom", "random") or not low <= alpha <= high:
            continue
        sums.setdefault((name, alpha), []).append(mean)
    alphas = sorted({a for _, a in sums})
    out = []
    for a in alphas:
        if ("bathroom", a) in sums and ("random", a) in sums:
            b = sums[("bathroom", a)]
            r = sums[("random", a)]
            out.append(ComparisonLine(a, sum(b) / len(b), sum(r) / len(r)))
    return out


def comparison_report(lines: Sequence[ComparisonLine], low: float = 0.3, high: float = 0.7) -> str:
    """Markdown table and verdict on whether bathroom needs fewer lookup probes
    than random at every load factor in ``[low, high]``."""
    out = [
        f"# Bathroom vs random: mean successful-lookup probes, load factor {low}-{high}",
        "",
        "| load factor | bathroom | random | bathroom - random |",
        "|---|---|---|---|",
    ]
    for ln in lines:
        out.append(f"| {ln.alpha:.2f} | {ln.bathroom:.4f} | {ln.random:.4f} | {ln.bathroom - ln.random:+.4f} |")
    if not lines:
        out += ["", "verdict: NO DATA (run needs both bathroom and random inside the band)"]
        return "\n".join(out) + "\n"
    wins = sum(ln.bathroom_lower for ln in lines)
    holds = wins == len(lines)
    out += [
        "",
        f"bathroom lower at {wins}/{len(lines)} load factors",
        f"verdict: claim {'HOLDS' if holds else 'DOES NOT HOLD'}",
    ]
    return "\n".join(out) + "\n"


def parse_growth(text: str) -> Growth:
    try:
        return Growth(text.lower())
    except ValueError:
        raise ValueError(f"growth must be 'additive' or 'multiplicative', got {text!r}") from None
