"""
The four objective levels built from one per-sample loss f(w, z):

  f(w, z)      per sample          sample_loss_and_grad
  f(w, ξ)      mean over a batch   batch_grad
  f_n(w)       mean over a shard   client_loss_and_grad
  F(w), F_m(w) γ-weighted clients  global_loss_and_grad

Client reductions run in ascending client index with left-to-right
accumulation so traces are bit-reproducible.
"""

import logging
from typing import Sequence

import numpy as np

from errors import ContractViolation, SingularSystemError, UnsupportedModelError
from numerics import ModelVector

from .default import QuadraticModel
from .model import LossModel
from .samples import Sample, Shard

logger = logging.getLogger(__name__)

WEIGHT_SUM_TOL = 1e-12
CONDITION_LIMIT = 1e12


def sample_loss_and_grad(model: LossModel, w: ModelVector, z: Sample) -> tuple[float, ModelVector]:
    features = np.asarray(z.x, dtype=np.float64).reshape(1, -1)
    losses, grads = model.per_sample(w, features, np.array([z.y], dtype=np.float64))
    return float(losses[0]), grads[0].copy()


def client_loss_and_grad(model: LossModel, w: ModelVector, shard: Shard) -> tuple[float, ModelVector]:
    shard.require_nonempty("client shard")
    return model.loss_and_grad(w, shard.features, shard.labels)


def batch_grad(model: LossModel, w: ModelVector, batch: Shard) -> ModelVector:
    batch.require_nonempty("batch")
    _, grad = model.loss_and_grad(w, batch.features, batch.labels)
    return grad


def check_weights(weights: Sequence[float]) -> None:
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0):
        raise ContractViolation("Aggregation weights must be nonnegative")
    total = 0.0
    for gamma in weights:
        total += float(gamma)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ContractViolation(f"Aggregation weights sum to {total!r}, not 1")


def global_loss_and_grad(
    model: LossModel,
    w: ModelVector,
    shards: Sequence[Shard],
    weights: Sequence[float],
) -> tuple[float, ModelVector]:
    """F(w) = Σ γ_n f_n(w) and ∇F(w); also F_m when given one cluster's shards."""
    if len(shards) != len(weights):
        raise ContractViolation(f"{len(shards)} shards but {len(weights)} weights")
    check_weights(weights)
    loss = 0.0
    grad = np.zeros(model.dim, dtype=np.float64)
    for gamma, shard in zip(weights, shards):
        client_loss, client_grad = client_loss_and_grad(model, w, shard)
        loss += float(gamma) * client_loss
        grad = grad + float(gamma) * client_grad
    return loss, grad


def weighted_normal_equations(shards: Sequence[Shard], weights: Sequence[float]):
    """Return (H, b) with H = Σ γ_n (1/D_n) Σ x xᵀ and b = Σ γ_n (1/D_n) Σ y x."""
    d = shards[0].d_in
    hessian = np.zeros((d, d), dtype=np.float64)
    rhs = np.zeros(d, dtype=np.float64)
    for gamma, shard in zip(weights, shards):
        shard.require_nonempty("client shard")
        hessian = hessian + float(gamma) * QuadraticModel.hessian(shard.features)
        rhs = rhs + float(gamma) * (shard.features.T @ shard.labels / len(shard))
    return hessian, rhs


def quadratic_minimizer(
    model: LossModel, shards: Sequence[Shard], weights: Sequence[float]
) -> ModelVector:
    """w* solving the weighted normal equations of the quadratic objective."""
    if model.kind != "quadratic":
        raise UnsupportedModelError(f"Closed-form minimizer needs a quadratic model, got {model.kind}")
    check_weights(weights)
    hessian, rhs = weighted_normal_equations(shards, weights)
    if np.linalg.cond(hessian) > CONDITION_LIMIT:
        raise SingularSystemError("Weighted second-moment matrix is singular; regularize the data")
    try:
        return np.linalg.solve(hessian, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularSystemError(f"Weighted normal equations are singular: {e}") from e


def client_minimum_quadratic(shard: Shard) -> float:
    """f_n* for the quadratic model: half the mean squared least-squares residual."""
    solution, *_ = np.linalg.lstsq(shard.features, shard.labels, rcond=None)
    residual = shard.features @ solution - shard.labels
    return float(0.5 * np.mean(residual**2))
