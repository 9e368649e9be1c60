import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveFloat, PositiveInt, model_validator

from errors import ContractViolation

ScheduleMode = Literal["sqrt", "power", "constant", "sqrt-nonconvex"]


def rounds_to_steps(T: int, q1: float) -> int:
    """K = ⌈T^{q1}⌉, rounded first so T^{q1} landing an ulp above an integer does not add a step."""
    return max(1, math.ceil(round(T**q1, 9)))


class Schedule(BaseModel):
    """
    In-cluster learning-rate schedule η_0..η_{K−1}.

      sqrt            η_k = 1/(2·L·K·√(k+1))   (strongly convex, η_k ≤ 1/(2LK))
      power           η_k = 1/(2·L·K^q), q ≥ 2 (strongly convex, η_k ≤ 1/(2LK))
      sqrt-nonconvex  η_k = 1/(L·K·√(k+1))     (non-convex, η_k ≤ 1/(LK))
      constant        η_k = 1/(L·T^{q2}) with K = ⌈T^{q1}⌉, q1 ∈ (0,1),
                      q2 ≥ q1, 1 + q1 > q2     (non-convex, η_k ≤ 1/(LK))
    """

    mode: ScheduleMode = "sqrt"
    L: PositiveFloat
    K: PositiveInt
    q: float = 2.0
    T: PositiveInt | None = None
    q1: float | None = None
    q2: float | None = None

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _check_mode(self):
        if self.mode == "power" and self.q < 2:
            raise ValueError(f"power schedule needs q >= 2, got {self.q}")
        if self.mode == "constant":
            if self.T is None or self.q1 is None or self.q2 is None:
                raise ValueError("constant schedule needs T, q1 and q2")
            if not 0 < self.q1 < 1:
                raise ValueError(f"q1 must lie in (0, 1), got {self.q1}")
            if not (self.q2 >= self.q1 and 1 + self.q1 > self.q2):
                raise ValueError(f"need q2 >= q1 and 1 + q1 > q2, got q1={self.q1}, q2={self.q2}")
            if self.K != rounds_to_steps(self.T, self.q1):
                raise ValueError(f"constant schedule fixes K = ceil(T^q1) = {rounds_to_steps(self.T, self.q1)}")
        return self

    @classmethod
    def constant(cls, L: float, T: int, q1: float, q2: float) -> "Schedule":
        return cls(mode="constant", L=L, K=rounds_to_steps(T, q1), T=T, q1=q1, q2=q2)

    def rate(self, k: int) -> float:
        if not 0 <= k < self.K:
            raise ContractViolation(f"Step {k} outside 0..{self.K - 1}")
        if self.mode == "sqrt":
            return 1.0 / (2.0 * self.L * self.K * math.sqrt(k + 1))
        if self.mode == "power":
            return 1.0 / (2.0 * self.L * self.K**self.q)
        if self.mode == "sqrt-nonconvex":
            return 1.0 / (self.L * self.K * math.sqrt(k + 1))
        return 1.0 / (self.L * self.T**self.q2)

    def rates(self) -> np.ndarray:
        return np.array([self.rate(k) for k in range(self.K)])

    def precondition_bound(self) -> float:
        """1/(2LK) for the strongly convex modes, 1/(LK) for the non-convex ones."""
        if self.mode in ("sqrt", "power"):
            return 1.0 / (2.0 * self.L * self.K)
        return 1.0 / (self.L * self.K)

    def beta(self, mu: float) -> float:
        """β = (μ/2)·Σ_k η_k."""
        return 0.5 * mu * float(np.sum(self.rates()))


def schedule_rate(s: Schedule, k: int) -> float:
    return s.rate(k)
