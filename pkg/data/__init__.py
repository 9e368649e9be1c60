from .datasets import Dataset, DatasetSpec, generate_dataset
from .partition import (
    Partition,
    dirichlet_partition,
    label_histogram,
    largest_remainder,
    mean_tv_distance,
    partition_from_indices,
    total_variation,
)
from .clusters import ClusterAssignment, ClusterState, assign_clusters, build_cluster
from .io import export_partition, import_partition

__all__ = [
    "Dataset",
    "DatasetSpec",
    "generate_dataset",
    "Partition",
    "dirichlet_partition",
    "label_histogram",
    "largest_remainder",
    "mean_tv_distance",
    "partition_from_indices",
    "total_variation",
    "ClusterAssignment",
    "ClusterState",
    "assign_clusters",
    "build_cluster",
    "export_partition",
    "import_partition",
]
