from . import default
from .model import LossModel
from .config import models_config, build_model
from .samples import Sample, Shard, concat_shards
from .objectives import (
    batch_grad,
    client_loss_and_grad,
    client_minimum_quadratic,
    global_loss_and_grad,
    quadratic_minimizer,
    sample_loss_and_grad,
    weighted_normal_equations,
)

__all__ = [
    "default",
    "LossModel",
    "models_config",
    "build_model",
    "Sample",
    "Shard",
    "concat_shards",
    "batch_grad",
    "client_loss_and_grad",
    "client_minimum_quadratic",
    "global_loss_and_grad",
    "quadratic_minimizer",
    "sample_loss_and_grad",
    "weighted_normal_equations",
]
