"""Open-addressing hash tables with occupancy-adaptive probing.

The adaptive ("bathroom") strategy widens its probe step after a run of
occupied slots; random (double hashing), elastic and funnel strategies are
provided as baselines, along with a benchmark harness and a stall simulator.
"""

from .errors import (
    BathroomHashError, ContractViolation, InvalidParams, InvalidSpec, InvalidStart, NonPrimeCapacity,
)
from .hashing import HashPair, derive_hashes, mix64
from .metrics import OpKind, Recorder, SummaryStats
from .stall_oracle import oracle_search
from .stall_sim import Board, FindId, FindVacant, SimResult, occupancy_sweep, simulate_search
from .strategies import (
    AdaptiveParams, BathroomProbing, ElasticParams, ElasticProbing, FunnelParams, FunnelProbing,
    Growth, Observation, ProbeState, RandomProbing, adaptive_update, elastic_region, funnel_levels,
    make_strategy, probe_next, probe_start,
)
from .table import (
    SLOT_RECORD_BYTES, InsertStatus, ProbeTrace, SlotState, Table, TableConfig,
)
from .workload import Mode, TrialPlan, TrialSpec, build_trial, gen_unique_keys, next_prime, splitmix_next

__version__ = "0.1.0"
