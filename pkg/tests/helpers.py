import numpy as np

from data import Dataset, assign_clusters, partition_from_indices
from losses import Shard
from losses.default import QuadraticModel
from topology import path_graph
from engines import Problem


def scalar_dataset(targets) -> Dataset:
    """One 1-d sample per target with x = 1, so client n has f_n(w) = ½(w − a_n)²."""
    targets = np.asarray(targets, dtype=np.float64)
    return Dataset(Shard(np.ones((len(targets), 1)), targets), np.arange(len(targets)))


def scalar_partition(targets):
    dataset = scalar_dataset(targets)
    return partition_from_indices(dataset, [np.array([n]) for n in range(len(targets))])


def scalar_problem(targets, M=1, graph=None):
    assignment = assign_clusters(scalar_partition(targets), M)
    return Problem(QuadraticModel(1), assignment, graph or path_graph(M))
