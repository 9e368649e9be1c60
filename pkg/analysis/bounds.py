import logging
from collections.abc import Sequence

import numpy as np

from errors import ContractViolation, PreconditionError, UnsupportedModelError

from .constants import ConstantEstimates

logger = logging.getLogger(__name__)

# Relative slack when comparing step sizes against their precondition bound.
RATE_SLACK = 1e-12


def _check_rates(eta: np.ndarray, bound: float, what: str) -> None:
    if float(np.max(eta)) > bound * (1.0 + RATE_SLACK):
        raise PreconditionError(f"{what} needs every η_k ≤ {bound!r}, schedule has max η_k = {float(np.max(eta))!r}")


def theorem1_coefficients(L: float, eta: np.ndarray) -> dict[str, float]:
    """The K-step coefficients multiplying the τ, Δ, G² and θ² round sums."""
    K = len(eta)
    prefix_sq = np.concatenate(([0.0], np.cumsum(eta**2)[:-1]))
    ramp = 2.0 * np.arange(K) / K * prefix_sq
    return {
        "tau": float(np.sum(6.0 * L * K * eta**2)),
        "delta": float(np.sum(2.0 * eta * (1.0 - 2.0 * L * K * eta) * (L * K * eta - 1.0))),
        "G": float(np.sum(ramp)),
        "theta": float(np.sum(K * eta**2 + ramp)),
    }


def theorem1_curve(
    est: ConstantEstimates,
    schedule,
    cluster_sequence: Sequence[int],
    w0_gap: float,
    delta_series: Sequence[float] | None = None,
) -> np.ndarray:
    """
    Strongly convex optimality-gap bound for every horizon T′ = 0..T, where
    T = len(cluster_sequence). Missing Δ series are taken as zero.
    """
    if est.mu is None or est.tau_m is None:
        raise UnsupportedModelError(f"The strongly convex bound needs μ and w*, unavailable for {est.kind}")
    eta = schedule.rates()
    _check_rates(eta, 1.0 / (2.0 * est.L * schedule.K), "The strongly convex bound")
    beta = schedule.beta(est.mu)
    if not 0.0 < beta < 1.0:
        raise PreconditionError(f"β = {beta!r} must lie in (0, 1)")

    T = len(cluster_sequence)
    if delta_series is None:
        delta_series = [0.0] * T
    if len(delta_series) != T:
        raise ContractViolation(f"{len(delta_series)} Δ values for {T} rounds")
    seq = np.asarray(cluster_sequence, dtype=int)
    decay = (1.0 - beta) ** np.arange(T)
    c = theorem1_coefficients(est.L, eta)

    per_round = (
        c["tau"] * np.asarray(est.tau_m, dtype=np.float64)[seq]
        + c["delta"] * np.asarray(delta_series, dtype=np.float64)
        + c["G"] * est.G**2
        + c["theta"] * np.asarray(est.theta_m_sq, dtype=np.float64)[seq]
    )
    sums = np.concatenate(([0.0], np.cumsum(decay * per_round)))
    horizons = np.arange(T + 1)
    return 0.5 * est.L * ((1.0 - beta) ** horizons * w0_gap + sums)


def theorem1_rhs(
    est: ConstantEstimates,
    schedule,
    T: int,
    cluster_sequence: Sequence[int],
    w0_gap: float,
    delta_series: Sequence[float] | None = None,
) -> float:
    """Right-hand side of the strongly convex bound on F(w^T) − F(w*) for the visited clusters m(0..T−1)."""
    if len(cluster_sequence) != T:
        raise ContractViolation(f"Cluster sequence has {len(cluster_sequence)} entries for T={T}")
    value = float(theorem1_curve(est, schedule, cluster_sequence, w0_gap, delta_series)[-1])
    if value < 0:
        logger.warning("strongly convex bound is negative (%.4g) at T=%d", value, T)
    return value


def theorem2_rhs(
    est: ConstantEstimates,
    schedule,
    T: int,
    K: int,
    theta_series: Sequence[float],
    F0_minus_Fstar: float,
) -> float:
    """Right-hand side of the non-convex bound on (1/T)·Σ_t ‖∇F(w^t)‖²."""
    if T < 1:
        raise ContractViolation(f"The non-convex bound needs T ≥ 1, got {T}")
    if K != schedule.K:
        raise ContractViolation(f"K={K} but the schedule has K={schedule.K}")
    if len(theta_series) != T:
        raise ContractViolation(f"{len(theta_series)} θ² values for T={T}")
    eta = schedule.rates()
    _check_rates(eta, 1.0 / (est.L * K), "The non-convex bound")
    eta_sum = float(np.sum(eta))
    leading = 4.0 * F0_minus_Fstar / (T * eta_sum)
    theta_factor = 2.0 * est.L * K * float(np.sum(eta**2)) / eta_sum + 4.0
    return leading + theta_factor * float(np.mean(theta_series)) + 2.0 * est.sigma_sq
