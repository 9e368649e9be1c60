import numpy as np

from ..shared.base_model import BaseLossModel


class QuadraticModel(BaseLossModel):
    """Least squares: f(w, z) = ½(w·x − y)²."""

    kind = "quadratic"
    is_classifier = False

    def _per_sample(self, w, features, labels):
        residual = features @ w - labels
        return 0.5 * residual**2, residual[:, None] * features

    def _predict(self, w, features):
        return features @ w

    @staticmethod
    def hessian(features: np.ndarray) -> np.ndarray:
        """(1/D)·Σ x xᵀ, the constant Hessian of the mean loss over `features`."""
        return features.T @ features / features.shape[0]
