from .vector import (
    ModelVector,
    as_model_vector,
    check_same_dim,
    relative_error,
    zeros,
)
from .streams import RandomStream
from .oracle import finite_diff_grad

__all__ = [
    "ModelVector",
    "as_model_vector",
    "check_same_dim",
    "relative_error",
    "zeros",
    "RandomStream",
    "finite_diff_grad",
]
