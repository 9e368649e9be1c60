from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict

from errors import ContractViolation

logger = logging.getLogger(__name__)

FLOAT_WIRE_BITS = 32
NORM_BITS = 32


class Channel(str, Enum):
    CLIENT_UP = "client_up"
    CLIENT_DOWN = "client_down"
    ES_ES = "es_es"
    ES_PS = "es_ps"


@dataclass(frozen=True)
class TransferEvent:
    round: int
    channel: Channel
    bits: int


class LedgerSummary(BaseModel):
    """Per-channel totals and, for each round t, the totals of all events in rounds ≤ t."""

    totals: dict[str, int]
    total_bits: int
    prefix: list[dict[str, int]]

    model_config = ConfigDict(frozen=True, extra="forbid")


@dataclass
class CostLedger:
    """Cumulative bit counters per channel backed by an append-only event log."""

    counters: dict[Channel, int] = field(default_factory=lambda: {c: 0 for c in Channel})
    events: list[TransferEvent] = field(default_factory=list)

    def record_transfer(self, round: int, channel: Channel | str, bits: int) -> CostLedger:
        if bits < 0:
            raise ContractViolation(f"Transfers cannot carry negative bits ({bits})")
        if round < 0:
            raise ContractViolation(f"Round index must be nonnegative ({round})")
        channel = Channel(channel)
        self.events.append(TransferEvent(int(round), channel, int(bits)))
        self.counters[channel] += int(bits)
        logger.debug("ledger: round=%d %s +%d bits", round, channel.value, bits)
        return self

    @classmethod
    def replay(cls, events) -> CostLedger:
        ledger = cls()
        for event in events:
            ledger.record_transfer(event.round, event.channel, event.bits)
        return ledger

    def total(self, channel: Channel | str) -> int:
        return self.counters[Channel(channel)]

    @property
    def total_bits(self) -> int:
        return sum(self.counters.values())

    def totals_before(self, round: int) -> dict[Channel, int]:
        """Counters restricted to events recorded in rounds < `round`."""
        totals = {c: 0 for c in Channel}
        for event in self.events:
            if event.round < round:
                totals[event.channel] += event.bits
        return totals

    def snapshot(self) -> dict[str, int]:
        return {c.value: self.counters[c] for c in Channel}

    def summary(self) -> LedgerSummary:
        last_round = max((e.round for e in self.events), default=-1)
        per_round = [{c: 0 for c in Channel} for _ in range(last_round + 1)]
        for event in self.events:
            per_round[event.round][event.channel] += event.bits
        prefix, running = [], {c: 0 for c in Channel}
        for counts in per_round:
            for c in Channel:
                running[c] += counts[c]
            prefix.append({c.value: running[c] for c in Channel})
        return LedgerSummary(totals=self.snapshot(), total_bits=self.total_bits, prefix=prefix)

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(self.summary().model_dump_json(indent=2) + "\n", encoding="utf-8")


def vector_bits(d: int, levels: int | None = None) -> int:
    """Bits to send one d-dimensional vector: 32·d raw, or ⌈d·log₂(2s+1)⌉ + 32 when quantized to s levels."""
    if levels is None:
        return FLOAT_WIRE_BITS * d
    return math.ceil(d * math.log2(2 * levels + 1)) + NORM_BITS


def fedchs_upper_bounds(T: int, K: int, Q: int, n_max: int) -> tuple[int, int, int]:
    """(client_up_max, client_down_max, es_es_total) = (TKQN_max, TKQN_max, TQ)."""
    if min(T, K, Q, n_max) < 1:
        raise ContractViolation("T, K, Q and N_max must be positive")
    per_client = T * K * Q * n_max
    return per_client, per_client, T * Q


def bits_to_threshold(records, accuracy_series, gamma: float) -> int | None:
    """
    Total bits (all channels) recorded by the first trace row whose accuracy
    reaches `gamma`; None when no row qualifies.

    Row t holds w^t, so its bits are the prefix through the round that
    produced it (round t counting from 1). Row 0 is the initial model at 0 bits.
    """
    if len(records) != len(accuracy_series):
        raise ContractViolation(f"{len(records)} trace rows but {len(accuracy_series)} accuracies")
    for record, accuracy in zip(records, accuracy_series):
        if accuracy is not None and accuracy >= gamma:
            return record.total_bits
    return None
