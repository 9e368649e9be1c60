import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from engines import Schedule, qsgd_quantize, rounds_to_steps, schedule_rate
from errors import ContractViolation
from numerics import RandomStream


class TestSchedule:
    def test_sqrt_first_rate(self):
        assert schedule_rate(Schedule(mode="sqrt", L=1.0, K=4), 0) == 0.125

    def test_power_rate_is_flat(self):
        s = Schedule(mode="power", L=1.0, K=4, q=2.0)
        assert_allclose(s.rates(), [0.03125] * 4)

    def test_constant_mode_hits_bound(self):
        s = Schedule.constant(L=1.0, T=16, q1=0.5, q2=0.5)
        assert s.K == 4
        assert s.rate(0) == 0.25
        assert s.rate(0) <= s.precondition_bound()

    def test_sqrt_nonconvex(self):
        s = Schedule(mode="sqrt-nonconvex", L=2.0, K=4)
        assert s.rate(3) == pytest.approx(1.0 / (2.0 * 4 * 2.0))
        assert s.precondition_bound() == 1.0 / 8.0

    @pytest.mark.parametrize("mode", ["sqrt", "power", "sqrt-nonconvex"])
    @pytest.mark.parametrize("K", [1, 2, 7, 20])
    def test_rates_respect_precondition(self, mode, K):
        s = Schedule(mode=mode, L=3.0, K=K, q=2.5)
        assert np.all(s.rates() <= s.precondition_bound())

    @pytest.mark.parametrize("k", [-1, 4])
    def test_rate_out_of_range(self, k):
        with pytest.raises(ContractViolation):
            Schedule(mode="sqrt", L=1.0, K=4).rate(k)

    def test_power_needs_q_at_least_two(self):
        with pytest.raises(ValueError):
            Schedule(mode="power", L=1.0, K=4, q=1.5)

    def test_constant_mode_checks_exponents(self):
        with pytest.raises(ValueError):
            Schedule.constant(L=1.0, T=16, q1=0.5, q2=1.6)
        with pytest.raises(ValueError):
            Schedule(mode="constant", L=1.0, K=3, T=16, q1=0.5, q2=0.5)

    def test_beta(self):
        s = Schedule(mode="sqrt", L=1.0, K=2)
        assert s.beta(1.0) == pytest.approx(0.5 * (0.25 + 0.25 / math.sqrt(2)))

    def test_rounds_to_steps_absorbs_rounding(self):
        assert rounds_to_steps(1000, 1 / 3) == 10
        assert rounds_to_steps(17, 0.5) == 5


class TestQuantize:
    def test_zero_vector(self, stream):
        assert np.all(qsgd_quantize(np.zeros(3), 4, stream) == 0.0)

    def test_grid_points_are_exact(self, stream):
        assert qsgd_quantize(np.array([5.0, 0.0]), 1, stream).tolist() == [5.0, 0.0]

    def test_unbiased(self):
        stream = RandomStream(0)
        draws = np.array([qsgd_quantize(np.array([3.0, 4.0]), 1, stream) for _ in range(100_000)])
        mean = draws.mean(axis=0)
        stderr = draws.std(axis=0) / np.sqrt(len(draws))
        assert np.all(np.abs(mean - [3.0, 4.0]) <= 3 * stderr)

    def test_outputs_lie_on_the_level_grid(self, stream):
        v = stream.normal(size=10)
        q = qsgd_quantize(v, 4, stream)
        levels = np.abs(q) / np.linalg.norm(v) * 4
        assert_allclose(levels, np.round(levels), atol=1e-12)
        assert np.all((np.sign(q) == np.sign(v)) | (q == 0))

    def test_needs_a_level(self, stream):
        with pytest.raises(ContractViolation):
            qsgd_quantize(np.ones(2), 0, stream)
