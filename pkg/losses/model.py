from typing import Literal, Protocol

import numpy as np

from numerics import ModelVector


class LossModel(Protocol):
    """Defines the 'shape' every pluggable loss f(w, z) exposes to the engines."""

    kind: Literal["quadratic", "logistic", "mlp"]

    is_classifier: bool

    @property
    def dim(self) -> int: ...

    def per_sample(
        self, w: ModelVector, features: np.ndarray, labels: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]: ...

    def loss_and_grad(
        self, w: ModelVector, features: np.ndarray, labels: np.ndarray
    ) -> tuple[float, ModelVector]: ...

    def predict(self, w: ModelVector, features: np.ndarray) -> np.ndarray: ...

    def accuracy(self, w: ModelVector, features: np.ndarray, labels: np.ndarray) -> float: ...

    def strong_convexity(self) -> float | None: ...

    def initial_vector(self, scale: float, stream) -> ModelVector: ...
