import logging
from dataclasses import dataclass

import numpy as np

from errors import ContractViolation, PartitionInfeasibleError
from losses import Shard
from numerics import RandomStream

from .datasets import Dataset

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 100


@dataclass(frozen=True)
class Partition:
    """Per-client shards 𝒟_n; `indices` are the dataset rows each client holds."""

    shards: tuple[Shard, ...]
    indices: tuple[np.ndarray, ...]
    strata: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.shards:
            raise ContractViolation("A partition needs at least one client")
        empty = [n for n, shard in enumerate(self.shards) if len(shard) == 0]
        if empty:
            raise ContractViolation(f"Clients without samples: {empty}")

    @property
    def N(self) -> int:
        return len(self.shards)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(shard) for shard in self.shards)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def weights(self) -> tuple[float, ...]:
        """γ_n = D_n / D_A."""
        total = self.total
        return tuple(size / total for size in self.sizes)


def largest_remainder(proportions: np.ndarray, total: int) -> np.ndarray:
    """Integer counts summing to `total`; leftover units go to the largest remainders, lowest index first."""
    raw = np.asarray(proportions, dtype=np.float64) * total
    counts = np.floor(raw).astype(np.int64)
    leftover = total - int(counts.sum())
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[:leftover]] += 1
    return counts


def partition_from_indices(dataset: Dataset, client_indices: list[np.ndarray]) -> Partition:
    client_indices = [np.sort(np.asarray(idx, dtype=np.int64)) for idx in client_indices]
    return Partition(
        shards=tuple(dataset.samples.take(idx) for idx in client_indices),
        indices=tuple(client_indices),
        strata=tuple(dataset.strata[idx] for idx in client_indices),
    )


def dirichlet_partition(
    dataset: Dataset,
    N: int,
    lam: float,
    stream: RandomStream,
    max_retries: int = DEFAULT_RETRIES,
) -> Partition:
    """Per class, split samples across N clients with Dirichlet(λ·1_N) proportions."""
    if N < 1:
        raise ContractViolation(f"N must be at least 1, got {N}")
    if lam <= 0:
        raise ContractViolation(f"Dirichlet lambda must be positive, got {lam}")
    if len(dataset) < N:
        raise ContractViolation(f"{len(dataset)} samples cannot cover {N} clients")
    if N == 1:
        return partition_from_indices(dataset, [np.arange(len(dataset))])

    for attempt in range(max_retries):
        draws = stream.substream("attempt", attempt)
        buckets: list[list[np.ndarray]] = [[] for _ in range(N)]
        for cls in dataset.classes:
            members = np.flatnonzero(dataset.strata == cls)
            members = members[draws.permutation(len(members))]
            proportions = draws.dirichlet(np.full(N, float(lam)))
            if not np.all(np.isfinite(proportions)):
                break
            counts = largest_remainder(proportions, len(members))
            for n, part in enumerate(np.split(members, np.cumsum(counts)[:-1])):
                buckets[n].append(part)
        else:
            client_indices = [np.concatenate(parts) for parts in buckets]
            sizes = [len(idx) for idx in client_indices]
            if min(sizes) >= 1:
                logger.debug("Dirichlet partition accepted on attempt %d: sizes=%s", attempt, sizes)
                return partition_from_indices(dataset, client_indices)
        logger.warning("Dirichlet partition attempt %d left a client empty; retrying", attempt)

    raise PartitionInfeasibleError(
        f"No partition with every client nonempty after {max_retries} attempts (N={N}, lambda={lam})"
    )


def label_histogram(strata: np.ndarray, classes: np.ndarray) -> np.ndarray:
    counts = np.array([np.count_nonzero(strata == c) for c in classes], dtype=np.float64)
    return counts / counts.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def mean_tv_distance(partition: Partition) -> float:
    """Mean over clients of the TV distance between client and global label distributions."""
    pooled = np.concatenate(partition.strata)
    classes = np.unique(pooled)
    reference = label_histogram(pooled, classes)
    distances = [total_variation(label_histogram(s, classes), reference) for s in partition.strata]
    return float(np.mean(distances))
