import logging
from typing import Callable

import numpy as np

from errors import ContractViolation, EvaluationFailure

from .vector import ModelVector, as_model_vector

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-5


def finite_diff_grad(
    loss_eval: Callable[[ModelVector], float],
    w: ModelVector,
    eps: float = DEFAULT_EPS,
) -> ModelVector:
    """Central-difference gradient: (f(w+eps·e_i) − f(w−eps·e_i)) / (2·eps)."""
    if not 1e-8 <= eps <= 1e-3:
        raise ContractViolation(f"eps must lie in [1e-8, 1e-3], got {eps}")
    w = as_model_vector(w)
    grad = np.empty_like(w)
    for i in range(w.size):
        step = np.zeros_like(w)
        step[i] = eps
        f_plus = float(loss_eval(w + step))
        f_minus = float(loss_eval(w - step))
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise EvaluationFailure(f"Non-finite loss while perturbing component {i}")
        grad[i] = (f_plus - f_minus) / (2.0 * eps)
    return grad
