class FedChsError(Exception):
    """Base class for every error raised by the simulator."""


class ContractViolation(FedChsError, ValueError):
    """A caller broke a documented precondition (dimensions, ranges, sums)."""


class EvaluationFailure(FedChsError):
    """A loss evaluation returned a non-finite value."""


class EmptyShardError(FedChsError, ValueError):
    """A client shard or batch holds no samples."""


class SingularSystemError(FedChsError):
    """A linear system that must be solved exactly is singular."""


class PartitionInfeasibleError(FedChsError):
    """Dirichlet partitioning left a client empty after every retry."""


class UnsupportedModelError(FedChsError):
    """The requested analysis is not defined for this loss model."""


class PreconditionError(FedChsError, ValueError):
    """A theorem precondition (step-size bound, beta range) does not hold."""


class ConfigError(FedChsError):
    """An experiment config could not be parsed or validated."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))
