from typing import Protocol

from numerics import ModelVector

from .problem import Problem
from .run_config import RunConfig
from .trace import RunResult


class Engine(Protocol):
    """Defines the 'shape' every training algorithm exposes to the experiment runner."""

    name: str

    def run(self, config: RunConfig, problem: Problem, w0: ModelVector | None = None) -> RunResult: ...
