"""Self-check suites behind ``bathroom-bench verify``.

Each suite returns a list of failure messages; each message carries enough
(seed, parameters, operation index) to reproduce the failure.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
from typing import Callable

from .hashing import HashPair, derive_hashes
from .metrics import OpKind, Recorder
from .stall_oracle import oracle_search
from .stall_sim import Board, FindId, FindVacant, simulate_search
from .strategies import (
    STRATEGY_NAMES, AdaptiveParams, BathroomProbing, Observation, RandomProbing,
    make_strategy, probe_next, probe_start,
)
from .table import InsertStatus, Table, TableConfig
from .workload import SplitMix64, gen_unique_keys

Suite = Callable[[int], list[str]]


def differential_run(
    strategy_name: str, seed: int, n_ops: int, m: int = 1009, pool_size: int = 1000,
    rehash_at: float = 0.9,
) -> list[str]:
    """Random insert/lookup/delete against a dict. Rebuilds the table once
    occupied plus tombstone slots pass ``rehash_at * m`` so paths stay short."""
    rng = random.Random(seed)
    pool = gen_unique_keys(pool_size, seed)
    table = Table(TableConfig(m, make_strategy(strategy_name), seed))
    ref: dict[int, int] = {}
    failures: list[str] = []

    def fail(i: int, msg: str) -> None:
        failures.append(
            f"strategy={strategy_name} seed={seed} m={m} op#{i}: {msg}"
        )

    rand, bits = rng.random, rng.getrandbits
    limit = rehash_at * m
    budget = 2 * m
    for i in range(n_ops):
        key = pool[int(rand() * pool_size)]
        r = rand()
        if r < 0.5:
            value = bits(64)
            out = table.insert(key, value)
            if out.status is InsertStatus.TABLE_FULL:
                if table.occupied_count != m:
                    fail(i, f"TableFull with only {table.occupied_count} occupied")
            elif (out.status is InsertStatus.UPDATED) != (key in ref):
                fail(i, f"insert({key}) -> {out.status.name}, reference has key: {key in ref}")
            else:
                ref[key] = value
        elif r < 0.8:
            out = table.lookup(key)
            if out.found != (key in ref) or (out.found and out.value != ref[key]):
                fail(i, f"lookup({key}) -> {out}, reference {ref.get(key)}")
        else:
            out = table.delete(key)
            if out.deleted != (key in ref):
                fail(i, f"delete({key}) -> {out.deleted}, reference has key: {key in ref}")
            ref.pop(key, None)
        if out.probes > budget:
            fail(i, f"{out.probes} probes exceeds 2m")
        if failures:
            return failures
        if table.occupied_count + table.tombstone_count > limit:
            table = table.rehash()
    if table.recount()[:2] != (table.occupied_count, table.tombstone_count):
        fail(n_ops, "slot counters disagree with a recount")
    if dict(table.items()) != ref:
        fail(n_ops, "final contents differ from reference")
    return failures


def saturation_run(strategy_name: str, seed: int, n_ops: int, m: int = 13) -> list[str]:
    """Tiny table, no rehash: drives it full, through tombstone-only paths and TableFull."""
    return differential_run(strategy_name, seed, n_ops, m=m, pool_size=2 * m, rehash_at=math.inf)


def suite_oracle(seed: int, n_ops: int = 20000) -> list[str]:
    failures = []
    for name in STRATEGY_NAMES:
        failures += differential_run(name, seed, n_ops)
        failures += saturation_run(name, seed, n_ops // 4)
    return failures


def random_sequence(hp: HashPair, m: int) -> list[int]:
    state, slot = probe_start(RandomProbing(), hp, m)
    seq = [slot]
    while (slot := probe_next(RandomProbing(), state, Observation.OCCUPIED_OTHER, m)) is not None:
        seq.append(slot)
    return seq


def suite_permutation(seed: int, sampled_m: int = 10007, samples: int = 1000) -> list[str]:
    failures = []
    for m in (7, 101):
        for home, d0 in itertools.product(range(m), range(1, m)):
            # h1 = home and h2 = d0 - 1 give exactly this (home, d0) pair
            seq = random_sequence(HashPair(home, d0 - 1), m)
            if len(seq) != m or len(set(seq)) != m:
                failures.append(f"m={m} home={home} d0={d0}: not a permutation")
    for key in gen_unique_keys(samples, seed):
        seq = random_sequence(derive_hashes(key, seed), sampled_m)
        if len(set(seq)) != sampled_m:
            failures.append(f"m={sampled_m} key={key} seed={seed}: not a permutation")
    return failures


def suite_reduction(seed: int, m: int = 1009, alpha: float = 0.7, samples: int = 1000) -> list[str]:
    keys = gen_unique_keys(int(alpha * m) + samples, seed)
    stored, probes = keys[: int(alpha * m)], keys[int(alpha * m):]
    reducer = BathroomProbing(AdaptiveParams(theta=m + 1))
    tables = [Table(TableConfig(m, s, seed)) for s in (RandomProbing(), reducer)]
    for t in tables:
        for k in stored:
            t.insert(k, k)
    failures = []
    for k in stored[:samples // 2] + probes[:samples // 2]:
        a, b = (t.probe_trace(k) for t in tables)
        if a != b:
            failures.append(f"seed={seed} m={m} key={k}: bathroom(theta=m+1) trace differs from random")
    return failures


def suite_sim(seed: int, max_n: int = 10, random_boards: int = 2000, random_n: int = 101) -> list[str]:
    failures = []
    predicates = lambda n: [FindVacant()] + [FindId(i) for i in range(n)]  # noqa: E731
    for n in range(1, max_n + 1):
        for mask in range(1 << n):
            board = Board.from_mask([(mask >> i) & 1 == 1 for i in range(n)])
            for theta in (1, 2):
                params = AdaptiveParams(theta=theta, delta=1)
                for d0 in (1, 2, 3):
                    if d0 > max(1, n - 1):
                        continue
                    for start in range(n):
                        for pred in predicates(n) if n <= 4 else [FindVacant(), FindId(mask % n)]:
                            a = simulate_search(board, start, d0, pred, params)
                            b = oracle_search(board, start, d0, pred, params)
                            if a != b:
                                failures.append(
                                    f"n={n} mask={mask:b} start={start} d0={d0} theta={theta} {pred}: {a} != {b}"
                                )
                                return failures
    rng = random.Random(seed)
    for i in range(random_boards):
        occ = rng.random()
        board = Board.from_mask([rng.random() < occ for _ in range(random_n)])
        start = rng.randrange(random_n)
        d0 = rng.randrange(1, random_n)
        params = AdaptiveParams(theta=rng.randint(1, 4), delta=rng.randint(1, 3))
        pred = FindVacant() if rng.random() < 0.5 else FindId(rng.randrange(random_n))
        if simulate_search(board, start, d0, pred, params) != oracle_search(board, start, d0, pred, params):
            failures.append(f"seed={seed} random board #{i}: simulator and oracle disagree")
    return failures


def suite_metrics(seed: int, n: int = 100000) -> list[str]:
    rng = SplitMix64(seed)
    values = [1 + rng.below(64) for _ in range(n)]
    rec = Recorder().record_many(OpKind.LOOKUP_HIT, values)
    s = rec.summarize(OpKind.LOOKUP_HIT)
    failures = []
    mean = statistics.fmean(values)
    std = statistics.pstdev(values)
    p99 = sorted(values)[math.ceil(0.99 * n) - 1]
    if not math.isclose(s.mean, mean, rel_tol=1e-9) or not math.isclose(s.stddev, std, rel_tol=1e-9):
        failures.append(f"seed={seed}: streaming mean/stddev {s.mean}/{s.stddev} vs {mean}/{std}")
    if s.p99 != p99 or s.max != max(values):
        failures.append(f"seed={seed}: p99/max {s.p99}/{s.max} vs {p99}/{max(values)}")
    half = n // 2
    a = Recorder().record_many(OpKind.LOOKUP_HIT, values[:half])
    b = Recorder().record_many(OpKind.LOOKUP_HIT, values[half:])
    if a.merge(b) != rec or b.merge(a) != rec:
        failures.append(f"seed={seed}: merge differs from recording the concatenation")
    return failures


SUITES: dict[str, Suite] = {
    "oracle": suite_oracle,
    "permutation": suite_permutation,
    "reduction": suite_reduction,
    "sim": suite_sim,
    "metrics": suite_metrics,
}


def run_suites(names: list[str], seed: int, log=print) -> bool:
    ok = True
    for name in names:
        failures = SUITES[name](seed)
        if failures:
            ok = False
            log(f"FAIL {name}: {len(failures)} failure(s)")
            for f in failures[:10]:
                log(f"  reproduce: {f}")
        else:
            log(f"ok   {name}")
    return ok
