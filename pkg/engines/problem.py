from dataclasses import dataclass
from functools import cached_property

import numpy as np

from data import ClusterAssignment, Partition
from errors import ContractViolation
from losses import LossModel, Shard, concat_shards, global_loss_and_grad
from numerics import ModelVector
from topology import EsGraph


@dataclass(frozen=True)
class Problem:
    """
    The fixed inputs shared by every engine: loss model, clients grouped into
    clusters, the ES graph and, when known, the global minimizer w*.
    """

    model: LossModel
    assignment: ClusterAssignment
    graph: EsGraph
    client_graph: EsGraph | None = None
    w_star: ModelVector | None = None

    @property
    def partition(self) -> Partition:
        return self.assignment.partition

    @property
    def dim(self) -> int:
        return self.model.dim

    def global_loss_and_grad(self, w: ModelVector) -> tuple[float, ModelVector]:
        return global_loss_and_grad(self.model, w, self.partition.shards, self.partition.weights)

    @cached_property
    def pooled(self) -> Shard:
        return concat_shards(list(self.partition.shards))

    @cached_property
    def f_star(self) -> float | None:
        if self.w_star is None:
            return None
        return self.global_loss_and_grad(self.w_star)[0]

    def accuracy(self, w: ModelVector) -> float | None:
        if not self.model.is_classifier:
            return None
        return self.model.accuracy(w, self.pooled.features, self.pooled.labels)

    def check_vector(self, w: np.ndarray) -> None:
        if w.shape != (self.dim,):
            raise ContractViolation(f"Initial model has shape {w.shape}, expected ({self.dim},)")
