"""Adaptive search over an externally supplied occupancy board.

Unlike the table, the board is not shaped by the searcher, so both halves of
the feedback rule fire here: runs of taken cells widen the step, and a
vacant cell that does not satisfy the predicate (``FindId``) narrows it.

The search makes at most ``n`` adaptive probes. Adaptation is applied between
probes only, so the ``n``-th observation does not change the step. If nothing
matched, a linear sweep from ``(start + 1) % n`` covers every cell once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidParams, InvalidStart
from .strategies import AdaptiveParams, adapt


@dataclass(frozen=True)
class Board:
    """Cells hold ``None`` when vacant, or the occupant id when taken."""

    cells: tuple[int | None, ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("board needs at least one cell")

    @property
    def size_n(self) -> int:
        return len(self.cells)

    @classmethod
    def from_mask(cls, taken: Sequence[bool]) -> "Board":
        """Board whose taken cells carry their own index as occupant id."""
        return cls(tuple(i if t else None for i, t in enumerate(taken)))


@dataclass(frozen=True)
class FindVacant:
    pass


@dataclass(frozen=True)
class FindId:
    id: int


SearchPredicate = Union[FindVacant, FindId]


@dataclass(frozen=True)
class SimResult:
    found_index: int | None
    probes: int
    trace: tuple[int, ...]
    fallback_used: bool
    decrease_events: int  # times the vacancy branch of the rule fired


def check_args(board: Board, start: int, d0: int) -> None:
    n = board.size_n
    if not 0 <= start < n:
        raise InvalidStart(f"start {start} outside board of {n} cells")
    if not 1 <= d0 <= max(1, n - 1):
        raise InvalidParams(f"d0 {d0} outside [1, {max(1, n - 1)}]")


def simulate_search(
    board: Board,
    start: int,
    d0: int,
    predicate: SearchPredicate,
    params: AdaptiveParams = AdaptiveParams(),
) -> SimResult:
    check_args(board, start, d0)
    cells = board.cells
    n = len(cells)
    want_vacant = isinstance(predicate, FindVacant)
    target = None if want_vacant else predicate.id
    trace = []
    step, count, decreases = d0, 0, 0
    slot = start
    for i in range(n):
        trace.append(slot)
        cell = cells[slot]
        if (cell is None) if want_vacant else (cell == target):
            return SimResult(slot, len(trace), tuple(trace), False, decreases)
        if i == n - 1:
            break
        occupied = cell is not None
        if not occupied:
            decreases += 1
        step, count = adapt(step, count, occupied, params, n)
        slot = (slot + step) % n
    for i in range(1, n + 1):
        slot = (start + i) % n
        trace.append(slot)
        cell = cells[slot]
        if (cell is None) if want_vacant else (cell == target):
            return SimResult(slot, len(trace), tuple(trace), True, decreases)
    return SimResult(None, len(trace), tuple(trace), True, decreases)


@dataclass(frozen=True)
class SimRow:
    n: int
    occupancy: float
    trials: int
    mean_probes: float
    stddev_probes: float
    max_probes: int
    found_rate: float


def random_board(n: int, occupancy: float, rng: np.random.Generator) -> Board:
    """Each cell taken independently with probability ``occupancy``."""
    return Board.from_mask((rng.random(n) < occupancy).tolist())


def occupancy_sweep(
    n: int,
    fractions: Sequence[float],
    trials: int,
    seed: int,
    params: AdaptiveParams = AdaptiveParams(),
) -> list[SimRow]:
    """FindVacant from random starts and steps over seeded random boards."""
    rows = []
    for fi, frac in enumerate(fractions):
        if not 0.0 <= frac <= 1.0:
            raise ValueError(f"occupancy {frac} outside [0, 1]")
        total = total_sq = worst = found = 0
        for t in range(trials):
            rng = np.random.default_rng((seed, fi, t))
            board = random_board(n, frac, rng)
            start = int(rng.integers(n))
            d0 = int(rng.integers(1, n)) if n > 1 else 1
            res = simulate_search(board, start, d0, FindVacant(), params)
            total += res.probes
            total_sq += res.probes * res.probes
            worst = max(worst, res.probes)
            found += res.found_index is not None
        mean = total / trials if trials else 0.0
        std = math.sqrt(max(0, trials * total_sq - total * total)) / trials if trials else 0.0
        rows.append(SimRow(n, frac, trials, mean, std, worst, found / trials if trials else 0.0))
    return rows
