from collections.abc import Sequence
import numpy as np
from pydantic import BaseModel, ConfigDict

from errors import ContractViolation

MIN_POINTS = 5


class RateFit(BaseModel):
    rho: float
    C: float
    residual: float

    model_config = ConfigDict(frozen=True)


def fit_linear_rate(gap_series: Sequence[float]) -> RateFit:
    """
    Least-squares fit of log gap_t = log C + t·log ρ.

    `residual` is the root-mean-square deviation in log space.
    """
    gaps = np.asarray(gap_series, dtype=np.float64)
    if gaps.size < MIN_POINTS:
        raise ContractViolation(f"A rate fit needs at least {MIN_POINTS} points, got {gaps.size}")
    if not np.all(gaps > 0):
        raise ContractViolation("A rate fit needs strictly positive gaps")
    t = np.arange(gaps.size, dtype=np.float64)
    logs = np.log(gaps)
    slope, intercept = np.polyfit(t, logs, 1)
    residual = float(np.sqrt(np.mean((logs - (intercept + slope * t)) ** 2)))
    return RateFit(rho=float(np.exp(slope)), C=float(np.exp(intercept)), residual=residual)


def positive_prefix(gap_series: Sequence[float | None], floor: float = 1e-13) -> list[float]:
    """Leading run of gaps above `floor`, before the series hits rounding noise."""
    prefix = []
    for gap in gap_series:
        if gap is None or gap <= floor:
            break
        prefix.append(float(gap))
    return prefix
