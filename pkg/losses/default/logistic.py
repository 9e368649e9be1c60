import numpy as np

from errors import ContractViolation

from ..shared.base_model import BaseLossModel


def _sigmoid_neg(margin: np.ndarray) -> np.ndarray:
    """σ(−m) computed without overflow."""
    return np.exp(-np.logaddexp(0.0, margin))


class LogisticModel(BaseLossModel):
    """
    Binary logistic loss with L2 regularization.

    f(w, z) = log(1 + exp(−m)) + (μ_reg/2)‖w‖² with margin m = (2y − 1)·(w·x),
    labels y in {0, 1}. Strongly convex with constant exactly μ_reg.
    """

    kind = "logistic"
    is_classifier = True

    def __init__(self, d_in: int, mu_reg: float = 0.01):
        super().__init__(d_in)
        if mu_reg < 0:
            raise ContractViolation(f"mu_reg must be nonnegative, got {mu_reg}")
        self.mu_reg = float(mu_reg)

    def _per_sample(self, w, features, labels):
        if not np.all((labels == 0.0) | (labels == 1.0)):
            raise ContractViolation("logistic labels must be 0 or 1")
        signs = 2.0 * labels - 1.0
        margin = signs * (features @ w)
        losses = np.logaddexp(0.0, -margin) + 0.5 * self.mu_reg * float(w @ w)
        grads = (-signs * _sigmoid_neg(margin))[:, None] * features + self.mu_reg * w
        return losses, grads

    def _predict(self, w, features):
        return (features @ w > 0.0).astype(np.float64)

    def strong_convexity(self) -> float | None:
        return self.mu_reg if self.mu_reg > 0 else None

    def smoothness_upper_bound(self, features: np.ndarray) -> float:
        """λ_max((1/D)·XᵀX)/4 + μ_reg, an analytic smoothness constant."""
        gram = features.T @ features / features.shape[0]
        return float(np.linalg.eigvalsh(gram)[-1]) / 4.0 + self.mu_reg
