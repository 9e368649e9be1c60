import numpy as np

from errors import ContractViolation
from numerics import ModelVector, RandomStream


def qsgd_quantize(v: ModelVector, s: int, stream: RandomStream) -> ModelVector:
    """
    Stochastic s-level quantization: ‖v‖·sign(v_i)·ζ_i with ζ_i on the grid {0, 1/s, …, 1}.

    ζ_i rounds s·|v_i|/‖v‖ up with probability equal to its fractional part,
    so E[ζ_i] = |v_i|/‖v‖ and the output is unbiased.
    """
    if s < 1:
        raise ContractViolation(f"Quantizer needs at least one level, got {s}")
    v = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return np.zeros_like(v)
    scaled = s * np.abs(v) / norm
    lower = np.floor(scaled)
    round_up = stream.uniform(size=v.shape) < (scaled - lower)
    levels = (lower + round_up) / s
    return norm * np.sign(v) * levels
