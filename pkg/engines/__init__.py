from . import default
from .engine import Engine
from .config import engines_config
from .problem import Problem
from .quantize import qsgd_quantize
from .reference import centralized_descent
from .run_config import RunConfig
from .schedule import Schedule, rounds_to_steps, schedule_rate
from .trace import TRACE_HEADER, DriftRecord, RunResult, TraceRecord, write_trace_csv
from .default.fedchs import (
    RoundState,
    local_update_step,
    run_cluster_round,
    run_fedchs,
    select_next_cluster,
)
from .default.fedavg import run_fedavg
from .default.hfl import run_hfl
from .default.sfl_randomwalk import run_sfl_randomwalk, walk_sequence

__all__ = [
    "default",
    "Engine",
    "engines_config",
    "Problem",
    "qsgd_quantize",
    "centralized_descent",
    "RunConfig",
    "Schedule",
    "rounds_to_steps",
    "schedule_rate",
    "TRACE_HEADER",
    "DriftRecord",
    "RunResult",
    "TraceRecord",
    "write_trace_csv",
    "RoundState",
    "local_update_step",
    "run_cluster_round",
    "run_fedchs",
    "select_next_cluster",
    "run_fedavg",
    "run_hfl",
    "run_sfl_randomwalk",
    "walk_sequence",
]
