from .ledger import (
    Channel,
    CostLedger,
    LedgerSummary,
    TransferEvent,
    bits_to_threshold,
    fedchs_upper_bounds,
    vector_bits,
)

__all__ = [
    "Channel",
    "CostLedger",
    "LedgerSummary",
    "TransferEvent",
    "bits_to_threshold",
    "fedchs_upper_bounds",
    "vector_bits",
]
