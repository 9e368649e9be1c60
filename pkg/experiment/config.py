import logging
from pathlib import Path
from typing import Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    model_validator,
)

from data import DatasetSpec
from data.clusters import ClusterPolicy
from engines.run_config import Algorithm
from engines.schedule import ScheduleMode, rounds_to_steps
from errors import ConfigError

logger = logging.getLogger(__name__)

NULL_WORDS = {"none", "null"}

Topology = Literal["random", "ring", "path"]


class ExperimentConfig(BaseModel):
    """
    One experiment: data, partition, topology, algorithm and analysis settings.

    Defaults are desk-scale: 20 clients in 4 clusters, 300 rounds of 10 steps.
    """

    algorithm: Algorithm = "fedchs"
    model: Literal["quadratic", "logistic", "mlp"] = "logistic"
    dataset: Literal["gaussian-blobs-binary", "linear-regression"] = "gaussian-blobs-binary"
    total_size: PositiveInt = 2000
    d_in: PositiveInt = Field(4, le=16)
    noise: NonNegativeFloat = 1.0
    class_count: PositiveInt = 2
    separation: PositiveFloat = 2.0

    N: PositiveInt = 20
    M: PositiveInt = 4
    T: PositiveInt = 300
    K: PositiveInt = 10
    lam: PositiveFloat = Field(0.6, alias="lambda")
    cluster_policy: ClusterPolicy = "contiguous"
    topology: Topology = "random"
    client_topology: Topology = "random"
    max_degree: PositiveInt = 3

    schedule: ScheduleMode = "sqrt"
    q: float = 2.0
    q1: float = 0.5
    q2: float = 0.5
    L: PositiveFloat | Literal["auto"] = "auto"
    Q: PositiveInt | Literal["auto"] = "auto"
    batch_size: PositiveInt | None = None
    quantize_levels: PositiveInt | None = None

    mu_reg: NonNegativeFloat = 0.01
    hidden: PositiveInt = 8
    init_scale: NonNegativeFloat = 0.0

    seed: int = 0
    probe_count: PositiveInt = 32
    bounds: Literal["thm1", "thm2", "both"] = "both"
    gamma: PositiveFloat | None = None
    out_dir: str | None = None

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    @model_validator(mode="after")
    def _consistent(self):
        if self.M > self.N:
            raise ValueError(f"M={self.M} clusters need at least as many clients, N={self.N}")
        if self.schedule == "constant" and self.K != rounds_to_steps(self.T, self.q1):
            raise ValueError(f"constant schedule fixes K = ceil(T^q1) = {rounds_to_steps(self.T, self.q1)}, got K={self.K}")
        return self

    def dataset_spec(self) -> DatasetSpec:
        return DatasetSpec(
            kind=self.dataset,
            total_size=self.total_size,
            d_in=self.d_in,
            noise=self.noise,
            class_count=self.class_count,
            separation=self.separation,
        )

    def with_overrides(self, **updates) -> "ExperimentConfig":
        """Copy with the non-None `updates` applied and re-validated."""
        data = self.model_dump(by_alias=True)
        data.update({k: v for k, v in updates.items() if v is not None})
        return ExperimentConfig.model_validate(data)


def parse_config_text(text: str) -> tuple[dict[str, str | None], dict[str, int]]:
    """
    Split `key = value` lines into raw values and the line each key came from.
    `#` starts a comment; blank lines are skipped.
    """
    values: dict[str, str | None] = {}
    lines: dict[str, int] = {}
    diagnostics = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            diagnostics.append(f"line {number}: expected 'key = value', got {raw.strip()!r}")
            continue
        if key in lines:
            diagnostics.append(f"line {number}: duplicate key '{key}' (first set on line {lines[key]})")
            continue
        values[key] = None if value.lower() in NULL_WORDS else value
        lines[key] = number
    if diagnostics:
        raise ConfigError(diagnostics)
    return values, lines


def _diagnostics(error: ValidationError, lines: dict[str, int]) -> list[str]:
    messages = []
    for item in error.errors():
        key = str(item["loc"][0]) if item["loc"] else None
        where = f"line {lines[key]}: " if key in lines else ""
        if item["type"] == "extra_forbidden":
            messages.append(f"{where}unknown key '{key}'")
        elif key is None:
            messages.append(f"{item['msg']}")
        else:
            messages.append(f"{where}{key}: {item['msg']}")
    return messages


def load_config_text(text: str) -> ExperimentConfig:
    values, lines = parse_config_text(text)
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(_diagnostics(e, lines)) from e


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError([f"cannot read {path}: {e}"]) from e
    config = load_config_text(text)
    logger.debug("Loaded config %s", path)
    return config
