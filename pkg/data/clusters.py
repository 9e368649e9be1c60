import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from errors import ContractViolation, PartitionInfeasibleError
from losses import Shard
from numerics import RandomStream

from .partition import Partition, largest_remainder

logger = logging.getLogger(__name__)

ClusterPolicy = Literal["contiguous", "round-robin", "iid-clusters"]


@dataclass(frozen=True)
class ClusterState:
    """One edge server: its clients 𝒩_m, weights γ_n^m = D_n / D_{A,m} and mass D_{A,m}."""

    index: int
    members: tuple[int, ...]
    shards: tuple[Shard, ...]
    weights: tuple[float, ...]
    mass: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ClusterAssignment:
    clusters: tuple[ClusterState, ...]
    partition: Partition
    policy: str

    @property
    def M(self) -> int:
        return len(self.clusters)

    @property
    def masses(self) -> tuple[int, ...]:
        return tuple(cluster.mass for cluster in self.clusters)

    @property
    def n_max(self) -> int:
        return max(cluster.size for cluster in self.clusters)

    def cluster_of(self, client: int) -> int:
        for cluster in self.clusters:
            if client in cluster.members:
                return cluster.index
        raise ContractViolation(f"Client {client} belongs to no cluster")


def build_cluster(index: int, members: list[int], partition: Partition) -> ClusterState:
    if not members:
        raise ContractViolation(f"Cluster {index} has no clients")
    sizes = [partition.sizes[n] for n in members]
    mass = sum(sizes)
    return ClusterState(
        index=index,
        members=tuple(members),
        shards=tuple(partition.shards[n] for n in members),
        weights=tuple(size / mass for size in sizes),
        mass=mass,
    )


def _membership(N: int, M: int, policy: ClusterPolicy) -> list[list[int]]:
    if policy == "contiguous":
        return [block.tolist() for block in np.array_split(np.arange(N), M)]
    # round-robin and iid-clusters share the same client membership.
    return [list(range(m, N, M)) for m in range(M)]


def _redeal_iid(partition: Partition, members: list[list[int]], stream: RandomStream | None) -> Partition:
    """
    Reassign samples so every cluster's label mix matches the global one.

    Samples are sorted by stratum and dealt to clusters round-robin, so each
    cluster gets ⌊n_c/M⌋ or ⌈n_c/M⌉ samples of every class. Inside a cluster each
    class is split across the member clients in proportion to what they held
    before, which keeps the within-cluster heterogeneity.
    """
    M = len(members)
    features = np.concatenate([s.features for s in partition.shards])
    labels = np.concatenate([s.labels for s in partition.shards])
    strata = np.concatenate(partition.strata)
    rows = np.concatenate(partition.indices)
    owner = np.concatenate([np.full(len(s), n) for n, s in enumerate(partition.shards)])

    order = np.argsort(rows, kind="stable")
    classes = np.unique(strata)
    dealt: list[list[int]] = [[] for _ in range(M)]
    position = 0
    for cls in classes:
        in_class = order[strata[order] == cls]
        if stream is not None:
            in_class = in_class[stream.permutation(len(in_class))]
        for j in in_class:
            dealt[position % M].append(int(j))
            position += 1

    client_positions: dict[int, list[int]] = {n: [] for group in members for n in group}
    for m, group in enumerate(members):
        pool = np.array(dealt[m], dtype=np.int64)
        if len(pool) < len(group):
            raise PartitionInfeasibleError(f"Cluster {m} has {len(pool)} samples for {len(group)} clients")
        for cls in classes:
            in_class = pool[strata[pool] == cls]
            held = np.array([np.count_nonzero((owner == n) & (strata == cls)) for n in group], dtype=np.float64)
            if held.sum() == 0:
                held = np.array([partition.sizes[n] for n in group], dtype=np.float64)
            counts = largest_remainder(held / held.sum(), len(in_class))
            for n, part in zip(group, np.split(in_class, np.cumsum(counts)[:-1])):
                client_positions[n].extend(part.tolist())
        for n in group:
            if not client_positions[n]:
                donor = max(group, key=lambda c: (len(client_positions[c]), -c))
                client_positions[n].append(client_positions[donor].pop())

    shards, indices, client_strata = [], [], []
    for n in range(partition.N):
        positions = np.array(client_positions[n], dtype=np.int64)
        positions = positions[np.argsort(rows[positions], kind="stable")]
        shards.append(Shard(features[positions], labels[positions]))
        indices.append(rows[positions])
        client_strata.append(strata[positions])
    return Partition(tuple(shards), tuple(indices), tuple(client_strata))


def assign_clusters(
    partition: Partition,
    M: int,
    policy: ClusterPolicy = "contiguous",
    stream: RandomStream | None = None,
) -> ClusterAssignment:
    """Group the N clients into M clusters; iid-clusters also re-deals the samples."""
    if not 1 <= M <= partition.N:
        raise ContractViolation(f"Need 1 ≤ M ≤ N, got M={M}, N={partition.N}")
    if policy not in ("contiguous", "round-robin", "iid-clusters"):
        raise ContractViolation(f"Unknown cluster policy: {policy}")

    members = _membership(partition.N, M, policy)
    if policy == "iid-clusters":
        partition = _redeal_iid(partition, members, stream)
    clusters = tuple(build_cluster(m, group, partition) for m, group in enumerate(members))
    logger.debug("Assigned %d clients to %d clusters (%s): masses=%s",
                 partition.N, M, policy, [c.mass for c in clusters])
    return ClusterAssignment(clusters, partition, policy)
