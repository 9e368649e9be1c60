from typing import Iterable

import numpy as np
import numpy.typing as npt

from errors import ContractViolation

# w, w^t, w^t_k and w* all live in one flat float64 array.
ModelVector = npt.NDArray[np.float64]

NORM_FLOOR = 1e-12


def as_model_vector(values: Iterable[float] | np.ndarray, dim: int | None = None) -> ModelVector:
    """Copy `values` into a finite, one-dimensional float64 vector."""
    w = np.array(values, dtype=np.float64).reshape(-1)
    if w.size == 0:
        raise ContractViolation("ModelVector must have a positive dimension")
    if dim is not None and w.size != dim:
        raise ContractViolation(f"Expected dimension {dim}, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise ContractViolation("ModelVector entries must be finite")
    return w


def zeros(dim: int) -> ModelVector:
    if dim < 1:
        raise ContractViolation(f"Dimension must be positive, got {dim}")
    return np.zeros(dim, dtype=np.float64)


def check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ContractViolation(f"Dimension mismatch: {a.shape} vs {b.shape}")


def relative_error(a: ModelVector, b: ModelVector) -> float:
    """‖a−b‖ / max(‖a‖, ‖b‖, 1e-12)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_dim(a, b)
    denom = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), NORM_FLOOR)
    return float(np.linalg.norm(a - b)) / denom
