import logging
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel

from data import ClusterAssignment
from engines import RunResult, Schedule
from errors import ContractViolation, UnsupportedModelError
from losses import LossModel

from .bounds import theorem1_curve, theorem2_rhs
from .constants import ConstantEstimates, delta_series

logger = logging.getLogger(__name__)

BoundKind = Literal["thm1", "thm2"]


class BoundRow(BaseModel):
    t: int
    measured: float
    bound: float
    margin: float


class HeterogeneitySummary(BaseModel):
    """Maxima over the visited clusters, and the residual μ·Δ_max the gap settles to."""

    delta_max: float | None = None
    theta_max_sq: float
    tau_max: float | None = None
    mu_delta_max: float | None = None


class BoundReport(BaseModel):
    kind: BoundKind
    algorithm: str
    passed: bool
    min_margin: float
    rows: list[BoundRow]
    beta: float | None = None
    summary: HeterogeneitySummary
    constants: ConstantEstimates

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")


def check_trace_against_bound(
    result: RunResult,
    bound_kind: BoundKind,
    est: ConstantEstimates,
    schedule: Schedule,
    model: LossModel,
    assignment: ClusterAssignment,
) -> BoundReport:
    """
    Compare a Fed-CHS run with the strongly convex (thm1) or non-convex (thm2)
    bound at every horizon T′. Violations are findings, not errors.
    """
    sequence = result.cluster_sequence
    if len(sequence) != result.T:
        raise ContractViolation(f"{result.algorithm} runs carry no cluster sequence to check")
    records = result.records()
    thetas = [est.theta_m_sq[m] for m in sequence]
    deltas = None
    rows = []
    beta = None

    if bound_kind == "thm1":
        if est.mu is None or est.w_star is None:
            raise UnsupportedModelError(f"unsupported model: no strongly convex bound for {est.kind}")
        w_star = est.w_star_vector()
        deltas = delta_series(model, assignment, result.iterates[: result.T], sequence, w_star)
        w0_gap = float(np.sum((result.iterates[0] - w_star) ** 2))
        curve = theorem1_curve(est, schedule, sequence, w0_gap, deltas)
        if float(curve[-1]) < 0:
            logger.warning("strongly convex bound is negative (%.4g) at T=%d", curve[-1], result.T)
        beta = schedule.beta(est.mu)
        for record, bound in zip(records, curve):
            gap = record.loss - est.f_star
            rows.append(BoundRow(t=record.t, measured=gap, bound=float(bound), margin=float(bound) - gap))
    else:
        F0_minus_Fstar = records[0].loss - (est.f_star if est.f_star is not None else 0.0)
        running = 0.0
        for T_prime in range(1, result.T + 1):
            running += records[T_prime - 1].grad_sq_norm
            measured = running / T_prime
            bound = theorem2_rhs(est, schedule, T_prime, schedule.K, thetas[:T_prime], F0_minus_Fstar)
            rows.append(BoundRow(t=T_prime, measured=measured, bound=bound, margin=bound - measured))

    min_margin = min((row.margin for row in rows), default=0.0)
    passed = all(row.margin >= 0 for row in rows)
    if not passed:
        worst = min(rows, key=lambda row: row.margin)
        logger.warning("%s violated at T'=%d: measured %.6g > bound %.6g", bound_kind, worst.t, worst.measured, worst.bound)

    taus = None if est.tau_m is None else [est.tau_m[m] for m in sequence]
    delta_max = max((abs(d) for d in deltas), default=0.0) if deltas is not None else None
    summary = HeterogeneitySummary(
        delta_max=delta_max,
        theta_max_sq=max(thetas, default=0.0),
        tau_max=None if taus is None else max(taus, default=0.0),
        mu_delta_max=None if delta_max is None or est.mu is None else est.mu * delta_max,
    )
    return BoundReport(
        kind=bound_kind,
        algorithm=result.algorithm,
        passed=passed,
        min_margin=min_margin,
        rows=rows,
        beta=beta,
        summary=summary,
        constants=est,
    )
