from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from errors import ContractViolation, EmptyShardError


@dataclass(frozen=True)
class Sample:
    """One z = {x, y}: a feature vector and a real target or class index."""

    x: np.ndarray
    y: float


@dataclass(frozen=True)
class Shard:
    """
    An ordered, immutable list of samples stored column-wise.

    Used for a client's local dataset 𝒟_n, for a sampled batch ξ_{n,k}, and for
    a whole generated dataset.
    """

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64, ndmin=2)
        labels = np.array(self.labels, dtype=np.float64).reshape(-1)
        if features.shape[0] != labels.shape[0]:
            raise ContractViolation(
                f"{features.shape[0]} feature rows but {labels.shape[0]} labels"
            )
        if not (np.all(np.isfinite(features)) and np.all(np.isfinite(labels))):
            raise ContractViolation("Samples must be finite")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def d_in(self) -> int:
        return int(self.features.shape[1])

    @classmethod
    def from_samples(cls, samples: list[Sample]) -> Shard:
        if not samples:
            raise EmptyShardError("Cannot build a shard from zero samples")
        return cls(
            np.stack([np.asarray(s.x, dtype=np.float64) for s in samples]),
            np.array([s.y for s in samples], dtype=np.float64),
        )

    def sample(self, i: int) -> Sample:
        return Sample(self.features[i].copy(), float(self.labels[i]))

    def take(self, indices) -> Shard:
        indices = np.asarray(indices, dtype=np.int64)
        return Shard(self.features[indices], self.labels[indices])

    def require_nonempty(self, what: str = "shard") -> None:
        if len(self) == 0:
            raise EmptyShardError(f"Empty {what}")


def concat_shards(shards: list[Shard]) -> Shard:
    return Shard(
        np.concatenate([s.features for s in shards]),
        np.concatenate([s.labels for s in shards]),
    )
