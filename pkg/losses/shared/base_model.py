import numpy as np

from errors import ContractViolation, EmptyShardError, EvaluationFailure
from numerics import ModelVector, RandomStream, zeros


class BaseLossModel:
    """
    Common plumbing for the analytic loss models:

      - Subclasses override `_per_sample()` to return per-sample losses (n,) and
        gradients (n, d) for a block of samples.
      - This base class checks dimensions, averages the block, and offers the
        prediction/accuracy helpers used for the Γ-threshold comparison.
    """

    kind = "base"
    is_classifier = False

    def __init__(self, d_in: int):
        if d_in < 1:
            raise ContractViolation(f"d_in must be positive, got {d_in}")
        self.d_in = int(d_in)

    def __repr__(self):
        return f"{type(self).__name__}(d_in={self.d_in}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.d_in

    def _check(self, w: ModelVector, features: np.ndarray) -> None:
        if w.shape != (self.dim,):
            raise ContractViolation(f"{self.kind} expects w of dimension {self.dim}, got {w.shape}")
        if features.ndim != 2 or features.shape[1] != self.d_in:
            raise ContractViolation(
                f"{self.kind} expects features with {self.d_in} columns, got {features.shape}"
            )

    def per_sample(self, w, features, labels):
        self._check(w, features)
        return self._per_sample(w, features, labels)

    def loss_and_grad(self, w, features, labels) -> tuple[float, ModelVector]:
        """Unweighted mean loss and gradient over a nonempty block of samples."""
        if len(labels) == 0:
            raise EmptyShardError(f"{self.kind}: cannot average over zero samples")
        losses, grads = self.per_sample(w, features, labels)
        loss = float(np.mean(losses))
        grad = np.mean(grads, axis=0)
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise EvaluationFailure(f"{self.kind}: non-finite loss or gradient")
        return loss, grad

    def predict(self, w, features) -> np.ndarray:
        self._check(w, features)
        return self._predict(w, features)

    def accuracy(self, w, features, labels) -> float:
        if not self.is_classifier:
            raise ContractViolation(f"{self.kind} is not a classification model")
        predicted = self.predict(w, features)
        return float(np.mean(predicted == labels))

    def strong_convexity(self) -> float | None:
        return None

    def initial_vector(self, scale: float = 0.0, stream: RandomStream | None = None) -> ModelVector:
        if scale <= 0.0 or stream is None:
            return zeros(self.dim)
        return stream.normal(0.0, scale, size=self.dim)

    # --- Subclass hooks ---
    def _per_sample(self, w, features, labels) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def _predict(self, w, features) -> np.ndarray:
        raise NotImplementedError
