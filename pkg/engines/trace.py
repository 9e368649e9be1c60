import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from accounting import Channel, CostLedger
from utils import format_float

TRACE_HEADER = [
    "t",
    "cluster",
    "loss",
    "grad_sq_norm",
    "gap",
    "bits_client_up",
    "bits_client_down",
    "bits_es_es",
    "bits_es_ps",
]


@dataclass(frozen=True)
class TraceRecord:
    """State of w^t when round t starts, with the bits spent in rounds before t."""

    t: int
    cluster: int | None
    loss: float
    grad_sq_norm: float
    gap: float | None
    bits: dict[str, int]
    accuracy: float | None = None

    @property
    def total_bits(self) -> int:
        return sum(self.bits.values())

    def row(self) -> list[str]:
        return [
            str(self.t),
            "" if self.cluster is None else str(self.cluster),
            format_float(self.loss),
            format_float(self.grad_sq_norm),
            format_float(self.gap),
            *(str(self.bits[c.value]) for c in Channel),
        ]


@dataclass(frozen=True)
class DriftRecord:
    """‖w^t_0 − w^t_k‖² against its Cauchy–Schwarz bound k·Σ_{j<k} η_j²‖g_j‖²."""

    t: int
    k: int
    drift_sq: float
    bound: float


@dataclass
class RunResult:
    algorithm: str
    trace: list[TraceRecord]
    final: TraceRecord
    ledger: CostLedger
    iterates: list[np.ndarray]
    cluster_sequence: list[int] = field(default_factory=list)
    visit_counts: list[int] = field(default_factory=list)
    drift: list[DriftRecord] = field(default_factory=list)

    @property
    def w_final(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def T(self) -> int:
        return len(self.trace)

    def records(self) -> list[TraceRecord]:
        """Trace rows followed by the record of the final model w^T."""
        return [*self.trace, self.final]


def write_trace_csv(result: RunResult, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for record in result.trace:
            writer.writerow(record.row())
