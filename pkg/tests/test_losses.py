import numpy as np
import pytest
from numpy.testing import assert_allclose

from data import DatasetSpec, generate_dataset
from engines.shared.base_engine import draw_batch
from errors import ContractViolation, EmptyShardError, SingularSystemError, UnsupportedModelError
from losses import (
    Sample,
    Shard,
    batch_grad,
    build_model,
    client_loss_and_grad,
    client_minimum_quadratic,
    concat_shards,
    global_loss_and_grad,
    models_config,
    quadratic_minimizer,
    sample_loss_and_grad,
)
from losses.default import LogisticModel, MlpModel, QuadraticModel
from numerics import RandomStream, finite_diff_grad, relative_error


def random_block(kind, d_in, stream, n=12):
    features = stream.normal(size=(n, d_in))
    if kind == "quadratic":
        labels = stream.normal(size=n)
    else:
        labels = (stream.uniform(size=n) > 0.5).astype(np.float64)
    return features, labels


@pytest.mark.parametrize("kind", ["quadratic", "logistic", "mlp"])
def test_gradient_matches_finite_differences(kind):
    stream = RandomStream(11).substream(kind)
    model = build_model(kind, 3, mu_reg=0.1, hidden=4)
    features, labels = random_block(kind, 3, stream)
    for point in range(20):
        w = stream.substream("point", point).normal(0.0, 0.5, size=model.dim)
        _, grad = model.loss_and_grad(w, features, labels)
        numeric = finite_diff_grad(lambda v: model.loss_and_grad(v, features, labels)[0], w)
        assert relative_error(grad, numeric) <= 1e-5


def test_registry_builds_each_model():
    assert set(models_config) == {"quadratic", "logistic", "mlp"}
    assert isinstance(build_model("logistic", 2, mu_reg=0.5), LogisticModel)
    assert build_model("mlp", 2, hidden=3).dim == 3 * 2 + 2 * 3 + 1


def test_quadratic_scalar_example():
    model = QuadraticModel(1)
    loss, grad = model.loss_and_grad(np.array([0.0]), np.ones((1, 1)), np.array([2.0]))
    assert loss == 2.0
    assert_allclose(grad, [-2.0])


def test_logistic_rejects_non_binary_labels():
    with pytest.raises(ContractViolation):
        LogisticModel(1).loss_and_grad(np.zeros(1), np.ones((1, 1)), np.array([2.0]))


def test_logistic_predicts_sign_and_reports_convexity():
    model = LogisticModel(1, mu_reg=0.2)
    assert model.strong_convexity() == 0.2
    assert LogisticModel(1, mu_reg=0.0).strong_convexity() is None
    features = np.array([[1.0], [-1.0]])
    assert model.accuracy(np.array([1.0]), features, np.array([1.0, 0.0])) == 1.0


def test_mlp_unpack_layout():
    model = MlpModel(2, hidden=3)
    w = np.arange(model.dim, dtype=np.float64)
    w1, b1, w2, b2 = model.unpack(w)
    assert w1.shape == (3, 2)
    assert b1.tolist() == [6.0, 7.0, 8.0]
    assert w2.tolist() == [9.0, 10.0, 11.0]
    assert b2 == 12.0


def test_accuracy_rejects_regression_model():
    with pytest.raises(ContractViolation):
        QuadraticModel(1).accuracy(np.zeros(1), np.ones((1, 1)), np.zeros(1))


def test_empty_block_raises():
    with pytest.raises(EmptyShardError):
        QuadraticModel(2).loss_and_grad(np.zeros(2), np.zeros((0, 2)), np.zeros(0))


def test_dimension_mismatch_raises():
    with pytest.raises(ContractViolation):
        QuadraticModel(2).loss_and_grad(np.zeros(3), np.zeros((1, 2)), np.zeros(1))


class TestObjectives:
    def test_global_objective_is_weighted_sum(self):
        model = QuadraticModel(1)
        shards = [Shard(np.ones((1, 1)), [0.0]), Shard(np.ones((1, 1)), [4.0])]
        loss, grad = global_loss_and_grad(model, np.array([1.0]), shards, [0.25, 0.75])
        assert loss == pytest.approx(0.25 * 0.5 + 0.75 * 4.5)
        assert_allclose(grad, [0.25 * 1.0 + 0.75 * -3.0])

    def test_weights_must_sum_to_one(self):
        shards = [Shard(np.ones((1, 1)), [0.0])]
        with pytest.raises(ContractViolation):
            global_loss_and_grad(QuadraticModel(1), np.zeros(1), shards, [0.9])

    def test_quadratic_minimizer_two_targets(self):
        shards = [Shard(np.ones((1, 1)), [0.0]), Shard(np.ones((1, 1)), [4.0])]
        assert_allclose(quadratic_minimizer(QuadraticModel(1), shards, [0.5, 0.5]), [2.0])

    def test_quadratic_minimizer_is_a_stationary_point(self, stream):
        shards = [Shard(stream.normal(size=(10, 3)), stream.normal(size=10)) for _ in range(3)]
        weights = [0.2, 0.3, 0.5]
        w_star = quadratic_minimizer(QuadraticModel(3), shards, weights)
        _, grad = global_loss_and_grad(QuadraticModel(3), w_star, shards, weights)
        assert np.linalg.norm(grad) < 1e-10

    def test_singular_system(self):
        shards = [Shard(np.array([[1.0, 1.0]]), [1.0])]
        with pytest.raises(SingularSystemError):
            quadratic_minimizer(QuadraticModel(2), shards, [1.0])

    def test_minimizer_needs_quadratic_model(self):
        with pytest.raises(UnsupportedModelError):
            quadratic_minimizer(LogisticModel(1), [Shard(np.ones((1, 1)), [1.0])], [1.0])

    def test_client_minimum_of_consistent_system_is_zero(self):
        shard = Shard(np.eye(2), [1.0, -1.0])
        assert client_minimum_quadratic(shard) == pytest.approx(0.0, abs=1e-25)


def curvature_constants(model, features):
    """(L, μ) for the mean loss over `features`."""
    if model.kind == "quadratic":
        eigenvalues = np.linalg.eigvalsh(QuadraticModel.hessian(features))
        return float(eigenvalues[-1]), float(eigenvalues[0])
    return model.smoothness_upper_bound(features), model.strong_convexity()


@pytest.mark.parametrize("model", [QuadraticModel(3), LogisticModel(3, mu_reg=0.1)], ids=lambda m: m.kind)
def test_smooth_and_strongly_convex_on_random_pairs(model):
    stream = RandomStream(21).substream(model.kind)
    shard = Shard(*random_block(model.kind, 3, stream, n=30))
    L, mu = curvature_constants(model, shard.features)
    for pair in range(100):
        u, v = stream.substream("pair", pair).normal(0.0, 2.0, size=(2, 3))
        delta = client_loss_and_grad(model, u, shard)[1] - client_loss_and_grad(model, v, shard)[1]
        distance_sq = float(np.sum((u - v) ** 2))
        assert float(np.linalg.norm(delta)) <= L * np.sqrt(distance_sq) * (1 + 1e-9)
        assert float(delta @ (u - v)) >= mu * distance_sq * (1 - 1e-9)


def test_global_objective_with_size_weights_is_the_pooled_objective(stream):
    model = LogisticModel(3, mu_reg=0.05)
    shards = [Shard(*random_block("logistic", 3, stream.substream(n), n=size)) for n, size in enumerate([4, 9, 17])]
    total = sum(len(s) for s in shards)
    w = stream.normal(size=3)
    loss, grad = global_loss_and_grad(model, w, shards, [len(s) / total for s in shards])
    pooled_loss, pooled_grad = client_loss_and_grad(model, w, concat_shards(shards))
    assert loss == pytest.approx(pooled_loss, rel=1e-12)
    assert_allclose(grad, pooled_grad, rtol=1e-12, atol=1e-14)


def test_minibatch_gradient_is_unbiased(stream):
    model = QuadraticModel(3)
    shard = Shard(*random_block("quadratic", 3, stream, n=20))
    w = stream.normal(size=3)
    draws = np.array([
        batch_grad(model, w, draw_batch(shard, 5, stream.substream("batch", i))) for i in range(4000)
    ])
    _, full = client_loss_and_grad(model, w, shard)
    standard_error = draws.std(axis=0) / np.sqrt(len(draws))
    assert np.all(np.abs(draws.mean(axis=0) - full) <= 5 * standard_error + 1e-12)


def test_logistic_gradient_at_origin():
    model = LogisticModel(2, mu_reg=0.3)
    features = np.array([[1.0, -2.0], [0.5, 3.0]])
    for x, y in zip(features, [1.0, 0.0]):
        loss, grad = model.loss_and_grad(np.zeros(2), x.reshape(1, -1), np.array([y]))
        assert loss == pytest.approx(np.log(2.0))
        assert_allclose(grad, (0.5 - y) * x)


def test_sample_loss_matches_single_row_block():
    model = QuadraticModel(2)
    z = Sample(np.array([1.0, 2.0]), 3.0)
    w = np.array([0.5, -1.0])
    loss, grad = sample_loss_and_grad(model, w, z)
    assert loss == pytest.approx(0.5 * (0.5 - 2.0 - 3.0) ** 2)
    assert_allclose(grad, (0.5 - 2.0 - 3.0) * np.array([1.0, 2.0]))


def test_quadratic_minimizer_beats_every_perturbation(stream):
    model = QuadraticModel(3)
    shards = [Shard(*random_block("quadratic", 3, stream.substream(n), n=8)) for n in range(3)]
    weights = [0.5, 0.25, 0.25]
    w_star = quadratic_minimizer(model, shards, weights)
    best, _ = global_loss_and_grad(model, w_star, shards, weights)
    for i in range(50):
        nudge = stream.substream("nudge", i).normal(0.0, 10.0 ** -(i % 5), size=3)
        assert global_loss_and_grad(model, w_star + nudge, shards, weights)[0] >= best


def test_noiseless_regression_recovers_true_weights():
    spec = DatasetSpec(kind="linear-regression", total_size=200, d_in=4, noise=0.0)
    dataset = generate_dataset(spec, RandomStream(5).substream("dataset"))
    w_star = quadratic_minimizer(QuadraticModel(4), [dataset.samples], [1.0])
    assert_allclose(w_star, dataset.w_true, atol=1e-10)
