from .config import ExperimentConfig, load_config, load_config_text, parse_config_text
from .experiment import (
    ComparisonRow,
    Experiment,
    PartitionStats,
    RunSummary,
    build_graph,
    run_sweep,
)

__all__ = [
    "ExperimentConfig",
    "load_config",
    "load_config_text",
    "parse_config_text",
    "ComparisonRow",
    "Experiment",
    "PartitionStats",
    "RunSummary",
    "build_graph",
    "run_sweep",
]
