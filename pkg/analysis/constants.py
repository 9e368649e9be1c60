import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from data import ClusterAssignment, ClusterState
from errors import ContractViolation, UnsupportedModelError
from losses import (
    LossModel,
    Shard,
    client_loss_and_grad,
    client_minimum_quadratic,
    global_loss_and_grad,
    quadratic_minimizer,
)
from losses.default import QuadraticModel
from numerics import ModelVector, RandomStream

logger = logging.getLogger(__name__)

MIN_PROBES = 10
SOLVE_TOL = 1e-9
SOLVE_MAX_STEPS = 200_000


class ConstantEstimates(BaseModel):
    """
    Smoothness, convexity, gradient and heterogeneity constants of one
    partitioned problem. Per-client and per-cluster lists are 0-indexed.
    """

    kind: str
    L: float
    mu: float | None = None
    G: float
    sigma_n_sq: list[float]
    theta_m_sq: list[float]
    sigma_sq: float
    w_star: list[float] | None = None
    f_star: float | None = None
    f_n_star: list[float] | None = None
    tau_m: list[float] | None = None
    beta: float | None = None

    model_config = ConfigDict(extra="forbid")

    def w_star_vector(self) -> ModelVector:
        if self.w_star is None:
            raise UnsupportedModelError(f"No global minimizer is known for the {self.kind} model")
        return np.array(self.w_star, dtype=np.float64)


def solve_minimizer(
    model: LossModel,
    shards: Sequence[Shard],
    weights: Sequence[float],
    step: float,
    w0: ModelVector | None = None,
    tol: float = SOLVE_TOL,
) -> ModelVector:
    """Plain gradient descent with a fixed step until ‖∇‖ ≤ tol."""
    w = np.zeros(model.dim) if w0 is None else np.array(w0, dtype=np.float64)
    for i in range(SOLVE_MAX_STEPS):
        _, grad = global_loss_and_grad(model, w, shards, weights)
        if float(np.linalg.norm(grad)) <= tol:
            logger.debug("minimizer solve converged after %d steps", i)
            return w
        w = w - step * grad
    logger.warning("minimizer solve stopped at %d steps with ‖∇‖=%.3g", SOLVE_MAX_STEPS, np.linalg.norm(grad))
    return w


def cluster_delta(model: LossModel, cluster: ClusterState, w: ModelVector, w_star: ModelVector) -> float:
    """Δ_m = Σ_n γ_n^m (f_n(w) − f_n(w*)) at the current model w."""
    total = 0.0
    for shard, gamma in zip(cluster.shards, cluster.weights):
        total += gamma * (client_loss_and_grad(model, w, shard)[0] - client_loss_and_grad(model, w_star, shard)[0])
    return total


def cluster_tau(cluster: ClusterState, f_at_star: Sequence[float], f_n_star: Sequence[float]) -> float:
    """τ_m = Σ_n γ_n^m (f_n(w*) − f_n*)."""
    return sum(gamma * (f_at_star[n] - f_n_star[n]) for n, gamma in zip(cluster.members, cluster.weights))


def delta_series(
    model: LossModel,
    assignment: ClusterAssignment,
    iterates: Sequence[ModelVector],
    cluster_sequence: Sequence[int],
    w_star: ModelVector,
) -> list[float]:
    """Δ_{m(t)} evaluated at w^t for every round of a run."""
    return [
        cluster_delta(model, assignment.clusters[m], w, w_star)
        for w, m in zip(iterates, cluster_sequence)
    ]


def _ball_probes(center: ModelVector, radius: float, count: int, stream: RandomStream) -> list[ModelVector]:
    dim = center.shape[0]
    probes = []
    for i in range(count):
        s = stream.substream("probe", i)
        direction = s.normal(size=dim)
        direction = direction / max(float(np.linalg.norm(direction)), 1e-300)
        probes.append(center + radius * float(s.uniform()) ** (1.0 / dim) * direction)
    return probes


def _client_minima(model: LossModel, assignment: ClusterAssignment) -> list[float]:
    partition = assignment.partition
    if isinstance(model, QuadraticModel):
        return [client_minimum_quadratic(shard) for shard in partition.shards]
    minima = []
    for shard in partition.shards:
        step = 1.0 / model.smoothness_upper_bound(shard.features)
        w_n = solve_minimizer(model, [shard], [1.0], step)
        minima.append(client_loss_and_grad(model, w_n, shard)[0])
    return minima


def _max_secant(grads: np.ndarray, points: np.ndarray) -> float:
    """Largest ‖∇f(a) − ∇f(b)‖ / ‖a − b‖ over all point pairs; grads is (points, clients, dim)."""
    best = 0.0
    for i in range(len(points) - 1):
        dw = np.linalg.norm(points[i + 1 :] - points[i], axis=1)
        keep = dw > 0
        if not np.any(keep):
            continue
        dg = np.linalg.norm(grads[i + 1 :][keep] - grads[i], axis=2)
        best = max(best, float(np.max(dg / dw[keep][:, None])))
    return best


def estimate_constants(
    model: LossModel,
    assignment: ClusterAssignment,
    probe_count: int,
    stream: RandomStream,
    batch_size: int | None = None,
    w0: ModelVector | None = None,
    iterates: Sequence[ModelVector] = (),
    schedule=None,
) -> ConstantEstimates:
    """
    Estimate L, μ, G, σ_n², θ_m², σ², w*, f_n* and τ_m.

    Exact for the quadratic model where closed forms exist; elsewhere the
    constants are empirical maxima over `probe_count` points drawn from a ball
    around w* (radius 2·‖w⁰ − w*‖, or 2 when w* is unknown) plus any `iterates`
    of a run. β is filled in when a `schedule` is given and μ is known.
    """
    if probe_count < MIN_PROBES:
        raise ContractViolation(f"Need at least {MIN_PROBES} probes, got {probe_count}")
    partition = assignment.partition
    w0 = np.zeros(model.dim) if w0 is None else np.asarray(w0, dtype=np.float64)
    shards, weights = partition.shards, partition.weights

    w_star = None
    mu = None
    L = None
    if isinstance(model, QuadraticModel):
        w_star = quadratic_minimizer(model, shards, weights)
        L = max(float(np.linalg.eigvalsh(QuadraticModel.hessian(s.features))[-1]) for s in shards)
        cluster_hessians = [
            sum(gamma * QuadraticModel.hessian(s.features) for s, gamma in zip(c.shards, c.weights))
            for c in assignment.clusters
        ]
        mu = min(float(np.linalg.eigvalsh(h)[0]) for h in cluster_hessians)
    elif model.kind == "logistic":
        mu = model.strong_convexity()
        step = 1.0 / max(model.smoothness_upper_bound(s.features) for s in shards)
        w_star = solve_minimizer(model, shards, weights, step, w0=w0)

    if w_star is None:
        center, radius = w0, 2.0
    else:
        center = w_star
        radius = 2.0 * float(np.linalg.norm(w0 - w_star)) or 2.0
    points = _ball_probes(center, radius, probe_count, stream) + [np.asarray(w) for w in iterates]

    client_grads = np.array(
        [[client_loss_and_grad(model, w, shard)[1] for shard in shards] for w in points]
    )
    G = float(np.max(np.linalg.norm(client_grads, axis=2)))
    if L is None:
        L = _max_secant(client_grads, np.array(points))
        if mu is not None:
            L = max(L, mu)

    sigma_n_sq = []
    for shard in shards:
        if batch_size is None or batch_size >= len(shard):
            sigma_n_sq.append(0.0)
            continue
        worst = 0.0
        for w in points:
            _, per_sample_grads = model.per_sample(w, shard.features, shard.labels)
            deviation = per_sample_grads - per_sample_grads.mean(axis=0)
            worst = max(worst, float(np.max(np.sum(deviation**2, axis=1))))
        sigma_n_sq.append(worst)
    theta_m_sq = [
        sum(gamma * sigma_n_sq[n] for n, gamma in zip(c.members, c.weights)) for c in assignment.clusters
    ]

    global_grads = np.einsum("pnd,n->pd", client_grads, np.asarray(weights))
    sigma_sq = 0.0
    for c in assignment.clusters:
        cluster_grads = np.einsum("pnd,n->pd", client_grads[:, list(c.members)], np.asarray(c.weights))
        sigma_sq = max(sigma_sq, float(np.max(np.sum((global_grads - cluster_grads) ** 2, axis=1))))

    f_star = f_n_star = tau_m = None
    if w_star is not None:
        f_star = global_loss_and_grad(model, w_star, shards, weights)[0]
        f_n_star = _client_minima(model, assignment)
        f_at_star = [client_loss_and_grad(model, w_star, shard)[0] for shard in shards]
        tau_m = [cluster_tau(c, f_at_star, f_n_star) for c in assignment.clusters]

    beta = None
    if schedule is not None and mu is not None:
        beta = schedule.beta(mu)

    estimates = ConstantEstimates(
        kind=model.kind,
        L=L,
        mu=mu,
        G=G,
        sigma_n_sq=sigma_n_sq,
        theta_m_sq=theta_m_sq,
        sigma_sq=sigma_sq,
        w_star=None if w_star is None else [float(v) for v in w_star],
        f_star=f_star,
        f_n_star=f_n_star,
        tau_m=tau_m,
        beta=beta,
    )
    logger.info("constants: L=%.4g mu=%s G=%.4g sigma^2=%.4g", L, mu, G, sigma_sq)
    return estimates
