import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, NonNegativeFloat, PositiveFloat, PositiveInt, model_validator

from losses import Shard
from numerics import RandomStream

logger = logging.getLogger(__name__)


class DatasetSpec(BaseModel):
    """Desk-scale synthetic dataset description."""

    kind: Literal["gaussian-blobs-binary", "linear-regression"] = "gaussian-blobs-binary"
    total_size: PositiveInt = 2000
    d_in: PositiveInt = 4
    noise: NonNegativeFloat = 1.0
    class_count: PositiveInt = 2
    # Distance between the two blob centers.
    separation: PositiveFloat = 2.0

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _binary_blobs(self):
        if self.kind == "gaussian-blobs-binary" and self.class_count != 2:
            raise ValueError("gaussian-blobs-binary requires class_count = 2")
        return self


@dataclass(frozen=True)
class Dataset:
    """
    Generated samples plus the strata used for partitioning.

    For classification the strata are the labels; for regression they are
    `class_count` quantile bins of y.
    """

    samples: Shard
    strata: np.ndarray
    w_true: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.strata)


def quantile_bins(values: np.ndarray, bins: int) -> np.ndarray:
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[np.argsort(values, kind="stable")] = np.arange(len(values))
    return (ranks * bins) // len(values)


def generate_dataset(spec: DatasetSpec, stream: RandomStream) -> Dataset:
    n, d = spec.total_size, spec.d_in
    if spec.kind == "gaussian-blobs-binary":
        labels = stream.integers(0, 2, size=n).astype(np.float64)
        direction = np.ones(d) / np.sqrt(d)
        centers = np.stack([-0.5 * spec.separation * direction, 0.5 * spec.separation * direction])
        features = centers[labels.astype(np.int64)] + spec.noise * stream.normal(size=(n, d))
        dataset = Dataset(Shard(features, labels), labels.astype(np.int64))
    else:
        w_true = stream.normal(size=d)
        features = stream.normal(size=(n, d))
        targets = features @ w_true + spec.noise * stream.normal(size=n)
        dataset = Dataset(Shard(features, targets), quantile_bins(targets, spec.class_count), w_true)
    logger.debug("Generated %s dataset: %d samples, d_in=%d", spec.kind, n, d)
    return dataset
