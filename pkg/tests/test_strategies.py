import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bathroom_hash.errors import ContractViolation, InvalidParams
from bathroom_hash.hashing import HashPair
from bathroom_hash.strategies import (
    AdaptiveParams, BathroomProbing, ElasticParams, ElasticProbing, FunnelParams, FunnelProbing,
    Growth, Observation, ProbeState, RandomProbing, Region, adaptive_update, elastic_region,
    funnel_levels, normalize_step, probe_next, probe_start,
)

OCC = Observation.OCCUPIED_OTHER
TOMB = Observation.TOMBSTONE_SEEN
EMPTY = Observation.EMPTY_SEEN
PRIMES = [2, 3, 5, 7, 13, 101, 211, 1009]


def cursor_sequence(kind, hp, m, observations=None):
    """All strategy-phase slots via the cursor API."""
    state, slot = probe_start(kind, hp, m)
    seq = [slot]
    obs_iter = iter(observations or [])
    while True:
        slot = probe_next(kind, state, next(obs_iter, OCC), m)
        if slot is None:
            return seq
        seq.append(slot)


def walk_sequence(kind, hp, m, observations=None):
    gen = kind.walk(hp.h1, hp.h2, m)
    seq = [next(gen)]
    obs_iter = iter(observations or [])
    for _ in range(m):
        try:
            seq.append(gen.send(next(obs_iter, OCC)))
        except StopIteration:
            break
    return seq


def test_probe_start_home_and_step():
    state, slot = probe_start(RandomProbing(), HashPair(31, 28), 13)
    assert slot == 5
    assert state.step_d == 5  # 1 + 28 mod 12
    assert state.consec_c == 0 and state.probes_made == 0


def test_bathroom_hand_trace():
    kind = BathroomProbing(AdaptiveParams(theta=2, delta=1))
    # h1 = 5 gives home 5; h2 = 2 gives d0 = 3
    state, slot = probe_start(kind, HashPair(5, 2), 13)
    slots = [slot]
    for _ in range(3):
        slots.append(probe_next(kind, state, OCC, 13))
    assert slots == [5, 8, 12, 3]
    assert state.step_d == 4


def test_bathroom_large_theta_is_random():
    hp = HashPair(123456789, 987654321)
    for m in (13, 101):
        assert cursor_sequence(BathroomProbing(AdaptiveParams(theta=m + 1)), hp, m) == cursor_sequence(RandomProbing(), hp, m)


def test_elastic_regions_trace():
    m = 101
    kind = ElasticProbing(ElasticParams(t1=4, t2=16))
    hp = HashPair(0, 6)  # d0 = 7
    seq = cursor_sequence(kind, hp, m)
    assert seq[:5] == [0, 1, 2, 3, 4]
    assert seq[5] == 4 + 7
    # region B continues with d0 up to probe index 17
    assert all((seq[i + 1] - seq[i]) % m == 7 for i in range(4, 16))
    # region C: square offsets from probe 17's slot
    anchor = seq[16]
    assert [(s - anchor) % m for s in seq[16:21]] == [0, 1, 4, 9, 16]


@pytest.mark.parametrize("idx, region", [(1, Region.A), (4, Region.A), (5, Region.B), (16, Region.B), (17, Region.C)])
def test_elastic_region(idx, region):
    assert elastic_region(idx, ElasticParams(4, 16)) is region


@given(st.integers(1, 10_000), st.integers(1, 50), st.integers(1, 50))
def test_elastic_region_partition(idx, t1, gap):
    p = ElasticParams(t1, t1 + gap)
    r = elastic_region(idx, p)
    assert [idx <= p.t1, p.t1 < idx <= p.t2, idx > p.t2].count(True) == 1
    assert r is (Region.A if idx <= p.t1 else Region.B if idx <= p.t2 else Region.C)


def test_adaptive_update_examples():
    params = AdaptiveParams(theta=2, delta=1)
    s = ProbeState(0, 3, HashPair(0, 0))
    s.consec_c = 1
    after = adaptive_update(s, OCC, params, 13)
    assert (after.step_d, after.consec_c) == (4, 0)
    assert (s.step_d, s.consec_c) == (3, 1)  # input untouched
    after = adaptive_update(ProbeState(0, 4, HashPair(0, 0)), EMPTY, params, 13)
    assert (after.step_d, after.consec_c) == (3, 0)
    after = adaptive_update(ProbeState(0, 1, HashPair(0, 0)), EMPTY, params, 13)
    assert (after.step_d, after.consec_c) == (1, 0)


def test_adaptive_update_multiplicative():
    params = AdaptiveParams(theta=1, growth=Growth.MULTIPLICATIVE)
    after = adaptive_update(ProbeState(0, 5, HashPair(0, 0)), TOMB, params, 13)
    assert after.step_d == 10
    after = adaptive_update(ProbeState(0, 7, HashPair(0, 0)), OCC, params, 13)
    assert after.step_d == normalize_step(14, 13) == 2
    after = adaptive_update(ProbeState(0, 5, HashPair(0, 0)), EMPTY, params, 13)
    assert after.step_d == 2


def test_funnel_levels_examples():
    assert funnel_levels(100, FunnelParams(3, 0.5, 4)) == ((0, 50), (50, 25), (75, 25))
    assert funnel_levels(7, FunnelParams(2, 0.5, 4)) == ((0, 3), (3, 4))


@given(st.integers(2, 5000), st.integers(2, 6), st.floats(0.05, 0.95))
def test_funnel_levels_cover_table(m, levels, shrink):
    params = FunnelParams(levels, shrink, 3)
    try:
        layout = funnel_levels(m, params)
    except InvalidParams:
        return
    assert len(layout) == levels
    assert sum(length for _, length in layout) == m
    pos = 0
    for offset, length in layout:
        assert offset == pos and length >= 1
        pos += length


def test_funnel_invalid_layouts():
    with pytest.raises(InvalidParams):
        funnel_levels(3, FunnelParams(4, 0.5, 1))
    with pytest.raises(InvalidParams):
        funnel_levels(10, FunnelParams(3, 0.9, 1))  # 9 + 8 > 10


def test_funnel_home_in_first_level():
    kind = FunnelProbing(FunnelParams(3, 0.5, 4))
    for h1 in range(0, 10_000, 37):
        _, slot = probe_start(kind, HashPair(h1, h1 * 7 + 1), 100)
        assert 0 <= slot < 50


def test_funnel_moves_down_levels():
    kind = FunnelProbing(FunnelParams(3, 0.5, 2))
    seq = cursor_sequence(kind, HashPair(11, 5), 101)
    layout = funnel_levels(101, kind.params)
    level_of = lambda s: next(i for i, (o, n) in enumerate(layout) if o <= s < o + n)  # noqa: E731
    assert [level_of(s) for s in seq[:5]] == [0, 0, 1, 1, 2]
    # final level scans linearly, wrapping inside the level
    off, n = layout[2]
    tail = seq[4:4 + n + 1]
    assert all((b - off) == (a - off + 1) % n for a, b in zip(tail, tail[1:]))


def test_permutation_exhaustive_small_primes():
    for m in (7, 101):
        for home, d0 in itertools.product(range(m), range(1, m)):
            seq = cursor_sequence(RandomProbing(), HashPair(home, d0 - 1), m)
            assert sorted(seq) == list(range(m))


def test_contract_violation_after_exhaustion():
    kind = RandomProbing()
    state, _ = probe_start(kind, HashPair(1, 1), 3)
    assert probe_next(kind, state, OCC, 3) is not None
    assert probe_next(kind, state, OCC, 3) is not None
    assert probe_next(kind, state, OCC, 3) is None
    with pytest.raises(ContractViolation):
        probe_next(kind, state, OCC, 3)


def test_param_validation():
    with pytest.raises(InvalidParams):
        AdaptiveParams(theta=0)
    with pytest.raises(InvalidParams):
        AdaptiveParams(delta=0)
    with pytest.raises(InvalidParams):
        ElasticParams(5, 5)
    with pytest.raises(InvalidParams):
        FunnelParams(levels=1)
    with pytest.raises(InvalidParams):
        FunnelParams(shrink=1.0)


KINDS = st.sampled_from([
    RandomProbing(),
    BathroomProbing(AdaptiveParams(2, 1)),
    BathroomProbing(AdaptiveParams(1, 3, Growth.MULTIPLICATIVE)),
    BathroomProbing(AdaptiveParams(3, 2)),
    ElasticProbing(ElasticParams(2, 5)),
    FunnelProbing(FunnelParams(2, 0.5, 2)),
    FunnelProbing(FunnelParams(3, 0.6, 3)),
])
OBS = st.sampled_from([OCC, TOMB, EMPTY])


@settings(max_examples=300)
@given(KINDS, st.sampled_from(PRIMES[1:]), st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1), st.lists(OBS, max_size=120))
def test_walk_matches_cursor(kind, m, h1, h2, observations):
    if isinstance(kind, FunnelProbing) and m < kind.params.levels * 4:
        m = 101
    hp = HashPair(h1, h2)
    seq = walk_sequence(kind, hp, m, observations)
    assert seq == cursor_sequence(kind, hp, m, observations)
    assert kind.home(h1, h2, m) == seq[0]


@settings(max_examples=300)
@given(KINDS, st.sampled_from(PRIMES), st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1), st.lists(OBS, max_size=60))
def test_step_and_slot_ranges(kind, m, h1, h2, observations):
    try:
        kind.validate(m)
    except InvalidParams:
        return
    state, slot = probe_start(kind, HashPair(h1, h2), m)
    obs_iter = iter(observations)
    while slot is not None:
        assert 0 <= slot < m
        assert 1 <= state.step_d <= max(1, m - 1)
        assert state.probes_made <= m
        slot = probe_next(kind, state, next(obs_iter, OCC), m)


@given(st.integers(1, 5), st.integers(1, 4), st.integers(1, 10**6), st.sampled_from([101, 211, 1009]))
def test_additive_growth_schedule(theta, delta, h2, m):
    """Under all-occupied feedback the step grows by delta every theta probes (mod wrap)."""
    kind = BathroomProbing(AdaptiveParams(theta, delta))
    state, _ = probe_start(kind, HashPair(0, h2), m)
    d0 = state.step_d
    for i in range(1, 4 * theta + 1):
        probe_next(kind, state, OCC, m)
        assert state.step_d == normalize_step(d0 + delta * (i // theta), m)
