from typing import Literal

from pydantic import BaseModel, ConfigDict, NonNegativeFloat, PositiveInt, model_validator

from .schedule import Schedule

Algorithm = Literal["fedchs", "fedavg", "hfl", "sfl-rw"]


class RunConfig(BaseModel):
    """Everything one engine run needs besides the data, model and topology."""

    algorithm: Algorithm = "fedchs"
    T: PositiveInt
    K: PositiveInt
    schedule: Schedule
    # None means full-shard batches.
    batch_size: PositiveInt | None = None
    # Bits per transmitted vector.
    Q: PositiveInt
    quantize_levels: PositiveInt | None = None
    seed: int = 0
    init_scale: NonNegativeFloat = 0.0

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _steps_match(self):
        if self.schedule.K != self.K:
            raise ValueError(f"schedule has K={self.schedule.K} but the run uses K={self.K}")
        return self
