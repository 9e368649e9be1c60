import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from errors import ContractViolation, EvaluationFailure
from numerics import RandomStream, as_model_vector, finite_diff_grad, relative_error, zeros


class TestRandomStream:
    def test_same_seed_and_key_repeat_draws(self):
        a = RandomStream(5).substream("train", 3, 1, 7)
        b = RandomStream(5).substream("train", 3, 1, 7)
        assert_array_equal(a.normal(size=6), b.normal(size=6))

    def test_substreams_do_not_depend_on_draw_order(self):
        root = RandomStream(9)
        first = root.substream(0).uniform(size=3)
        root.uniform(size=100)
        again = root.substream(0).uniform(size=3)
        assert_array_equal(first, again)

    def test_distinct_keys_give_distinct_draws(self):
        root = RandomStream(9)
        assert not np.array_equal(root.substream(0).uniform(size=4), root.substream(1).uniform(size=4))

    def test_string_keys_are_hashed_in_full(self):
        root = RandomStream(9)
        a = root.substream("partition-a").uniform(size=4)
        b = root.substream("partition-b").uniform(size=4)
        assert not np.array_equal(a, b)

    def test_position_counts_draws(self):
        s = RandomStream(1)
        s.normal(size=3)
        s.permutation(5)
        assert s.position == 8

    def test_without_replacement_is_distinct(self, stream):
        picks = stream.choice_without_replacement(10, 10)
        assert sorted(picks.tolist()) == list(range(10))

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_rejects_out_of_range_seed(self, seed):
        with pytest.raises(ContractViolation):
            RandomStream(seed)


def test_as_model_vector_validates():
    assert_array_equal(as_model_vector([1, 2]), np.array([1.0, 2.0]))
    with pytest.raises(ContractViolation):
        as_model_vector([1.0, np.nan])
    with pytest.raises(ContractViolation):
        as_model_vector([1.0], dim=2)
    with pytest.raises(ContractViolation):
        zeros(0)


def test_relative_error():
    assert relative_error(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 0.0
    assert relative_error(np.array([2.0]), np.array([1.0])) == pytest.approx(0.5)
    assert relative_error(np.zeros(2), np.zeros(2)) == 0.0


class TestFiniteDiff:
    def test_matches_analytic_gradient(self):
        a = np.array([1.0, -2.0, 0.5])

        def f(w):
            return float(np.sum(np.sin(w) * a))

        w = np.array([0.3, -1.1, 2.0])
        assert_allclose(finite_diff_grad(f, w), np.cos(w) * a, rtol=1e-8, atol=1e-9)

    @pytest.mark.parametrize("eps", [1e-9, 1e-2])
    def test_rejects_eps_outside_range(self, eps):
        with pytest.raises(ContractViolation):
            finite_diff_grad(lambda w: 0.0, np.zeros(2), eps=eps)

    def test_non_finite_evaluation_names_component(self):
        def f(w):
            return np.inf if w[1] > 0 else 0.0

        with pytest.raises(EvaluationFailure, match="component 1"):
            finite_diff_grad(f, np.zeros(2))
