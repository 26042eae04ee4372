"""Independent, deliberately naive re-reading of the stall search rule.

Shares no code with :mod:`stall_sim` or :mod:`strategies` beyond the data
types; it exists only to be compared against :func:`stall_sim.simulate_search`.
"""

from __future__ import annotations

from .errors import InvalidParams, InvalidStart
from .stall_sim import Board, FindId, FindVacant, SearchPredicate, SimResult
from .strategies import AdaptiveParams, Growth


def _matches(cell, predicate: SearchPredicate) -> bool:
    if isinstance(predicate, FindVacant):
        return cell is None
    if isinstance(predicate, FindId):
        return cell is not None and cell == predicate.id
    raise TypeError(predicate)


def oracle_search(
    board: Board,
    start: int,
    d0: int,
    predicate: SearchPredicate,
    params: AdaptiveParams = AdaptiveParams(),
) -> SimResult:
    n = board.size_n
    if start < 0 or start >= n:
        raise InvalidStart(f"start {start} not on a board of {n} cells")
    if d0 < 1 or d0 > max(1, n - 1):
        raise InvalidParams(f"d0 {d0} out of range for n={n}")
    visited: list[int] = []
    position = start
    step = d0
    run = 0
    shrinks = 0
    budget = n

    # adaptive phase
    while budget > 0:
        visited.append(position)
        budget -= 1
        cell = board.cells[position]
        if _matches(cell, predicate):
            return SimResult(position, len(visited), tuple(visited), False, shrinks)
        if budget == 0:
            break
        if cell is not None:
            run = run + 1
            if run >= params.theta:
                run = 0
                if params.growth == Growth.ADDITIVE:
                    grown = step + params.delta
                else:
                    grown = step * 2
                # wrap back into 1..n-1
                if n <= 2:
                    step = 1
                else:
                    while grown > n - 1:
                        grown -= n - 1
                    step = grown
        else:
            run = 0
            shrinks += 1
            if params.growth == Growth.ADDITIVE:
                step = step - params.delta
            else:
                step = step // 2
            if step < 1:
                step = 1
        position = position + step
        while position >= n:
            position -= n

    # linear fallback
    offset = 1
    while offset <= n:
        position = (start + offset) % n
        visited.append(position)
        if _matches(board.cells[position], predicate):
            return SimResult(position, len(visited), tuple(visited), True, shrinks)
        offset += 1
    return SimResult(None, len(visited), tuple(visited), True, shrinks)
