"""
Line-oriented partition exchange, one sample per line:

    client_id<TAB>label<TAB>x1,x2,...[<TAB>stratum]

The trailing stratum is optional on import. Without it the strata are the
labels when they are all integral, else zero.
"""

import logging
from pathlib import Path

import numpy as np

from errors import ContractViolation
from losses import Shard

from .partition import Partition

logger = logging.getLogger(__name__)


def export_partition(partition: Partition, path: str | Path) -> None:
    lines = []
    for client, shard in enumerate(partition.shards):
        for x, y, stratum in zip(shard.features, shard.labels, partition.strata[client]):
            features = ",".join(repr(float(v)) for v in x)
            lines.append(f"{client}\t{float(y)!r}\t{features}\t{int(stratum)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Wrote partition (%d clients, %d samples) to %s", partition.N, partition.total, path)


def _fallback_strata(labels: np.ndarray) -> np.ndarray:
    if np.all(labels == np.round(labels)):
        return labels.astype(np.int64)
    return np.zeros(len(labels), dtype=np.int64)


def import_partition(path: str | Path) -> Partition:
    rows: dict[int, list[tuple[float, list[float], int | None]]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) not in (3, 4):
            raise ContractViolation(f"line {lineno}: expected 3 or 4 tab-separated fields")
        try:
            client = int(parts[0])
            label = float(parts[1])
            x = [float(v) for v in parts[2].split(",")]
            stratum = int(parts[3]) if len(parts) == 4 else None
        except ValueError as e:
            raise ContractViolation(f"line {lineno}: {e}") from e
        rows.setdefault(client, []).append((label, x, stratum))

    if sorted(rows) != list(range(len(rows))):
        raise ContractViolation(f"Client ids must be 0..N-1, got {sorted(rows)}")
    given = {stratum is not None for samples in rows.values() for _, _, stratum in samples}
    if len(given) > 1:
        raise ContractViolation("Either every line or no line must carry a stratum")

    shards, indices, strata = [], [], []
    offset = 0
    for client in range(len(rows)):
        labels = np.array([label for label, _, _ in rows[client]])
        shards.append(Shard(np.array([x for _, x, _ in rows[client]]), labels))
        indices.append(np.arange(offset, offset + len(labels)))
        offset += len(labels)
        if given == {True}:
            strata.append(np.array([s for _, _, s in rows[client]], dtype=np.int64))
        else:
            strata.append(_fallback_strata(labels))
    return Partition(tuple(shards), tuple(indices), tuple(strata))
