import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from accounting import Channel, vector_bits
from data import Partition, assign_clusters
from engines import (
    RunConfig,
    Schedule,
    centralized_descent,
    run_fedavg,
    run_fedchs,
    run_hfl,
    run_sfl_randomwalk,
    walk_sequence,
)
from engines.shared.base_engine import draw_batch
from errors import ContractViolation
from losses import batch_grad
from losses.default import QuadraticModel
from numerics import RandomStream
from topology import path_graph, ring_graph
from tests.helpers import scalar_partition


def make_config(T, K, L=1.0, Q=32, **kwargs):
    return RunConfig(T=T, K=K, schedule=Schedule(mode="sqrt", L=L, K=K), Q=Q, **kwargs)


def single_client(shard):
    return Partition((shard,), (np.arange(len(shard)),), (np.zeros(len(shard), dtype=np.int64),))


class TestFedAvg:
    def test_one_client_one_step_is_sgd(self, quadratic_assignment):
        shard = quadratic_assignment.partition.shards[0]
        partition = single_client(shard)
        config = make_config(T=1, K=1, L=5.0, batch_size=3, seed=2)
        result = run_fedavg(config, QuadraticModel(3), partition)
        batch = draw_batch(shard, 3, RandomStream(2).substream("train", 0, 0, 0))
        expected = np.zeros(3) - config.schedule.rate(0) * batch_grad(QuadraticModel(3), np.zeros(3), batch)
        assert_array_equal(result.w_final, expected)

    def test_identical_shards_match_centralized_descent(self):
        partition = scalar_partition([2.0, 2.0, 2.0, 2.0])
        config = make_config(T=3, K=4)
        result = run_fedavg(config, QuadraticModel(1), partition)
        w = 0.0
        for t in range(3):
            for k in range(4):
                w = w - config.schedule.rate(k) * (w - 2.0)
            assert_allclose(result.iterates[t + 1], [w], rtol=1e-14)

    def test_matches_reference_federated_averaging(self, quadratic_assignment):
        partition = quadratic_assignment.partition
        config = make_config(T=6, K=3, L=5.0)
        result = run_fedavg(config, QuadraticModel(3), partition)

        w = np.zeros(3)
        for _ in range(6):
            local_models = []
            for shard in partition.shards:
                v = w.copy()
                for k in range(3):
                    X, y = shard.features, shard.labels
                    v = v - config.schedule.rate(k) * X.T @ (X @ v - y) / len(y)
                local_models.append(v)
            w = sum(gamma * v for gamma, v in zip(partition.weights, local_models))
        assert_allclose(result.w_final, w, rtol=1e-12, atol=1e-12)

    def test_server_traffic(self):
        partition = scalar_partition([float(n) for n in range(20)])
        result = run_fedavg(make_config(T=5, K=2, Q=64), QuadraticModel(1), partition)
        assert result.ledger.total(Channel.ES_PS) == 2 * 5 * 20 * 64
        assert result.ledger.total(Channel.CLIENT_UP) == 0

    def test_compressed_uploads(self):
        partition = scalar_partition([1.0, 2.0, 3.0])
        result = run_fedavg(make_config(T=4, K=2, Q=32, quantize_levels=4), QuadraticModel(1), partition)
        assert result.ledger.total(Channel.ES_PS) == 4 * 3 * (32 + vector_bits(1, 4))
        again = run_fedavg(make_config(T=4, K=2, Q=32, quantize_levels=4), QuadraticModel(1), partition)
        assert_array_equal(result.w_final, again.w_final)

    def test_centralized_reference_matches_single_client(self):
        partition = scalar_partition([3.0])
        config = make_config(T=4, K=3)
        result = run_fedavg(config, QuadraticModel(1), partition)
        iterates = centralized_descent(QuadraticModel(1), partition.shards[0], config.schedule, 4, np.zeros(1))
        for a, b in zip(result.iterates, iterates):
            assert_array_equal(a, b)


class TestHfl:
    def test_single_cluster_equals_fedchs(self, quadratic_assignment):
        partition = quadratic_assignment.partition
        clusters = assign_clusters(partition, 1)
        config = make_config(T=8, K=3, L=5.0, batch_size=4, seed=5)
        hfl = run_hfl(config, QuadraticModel(3), partition, clusters)
        fedchs = run_fedchs(config, QuadraticModel(3), partition, clusters, path_graph(1))
        for a, b in zip(hfl.iterates, fedchs.iterates):
            assert_array_equal(a, b)

    def test_two_clusters_match_branch_and_average(self):
        targets = [1.0, 3.0, -2.0, 6.0]
        partition = scalar_partition(targets)
        clusters = assign_clusters(partition, 2)
        config = make_config(T=5, K=3)
        result = run_hfl(config, QuadraticModel(1), partition, clusters)

        w = 0.0
        for _ in range(5):
            branches = []
            for members in ((0, 1), (2, 3)):
                v = w
                for k in range(3):
                    v = v - config.schedule.rate(k) * np.mean([v - targets[n] for n in members])
                branches.append(v)
            w = 0.5 * branches[0] + 0.5 * branches[1]
        assert_allclose(result.w_final, [w], rtol=1e-12, atol=1e-12)

    def test_traffic(self):
        partition = scalar_partition([float(n) for n in range(20)])
        clusters = assign_clusters(partition, 4)
        result = run_hfl(make_config(T=3, K=2, Q=64), QuadraticModel(1), partition, clusters)
        assert result.ledger.total(Channel.ES_PS) == 2 * 3 * 4 * 64
        assert result.ledger.total(Channel.CLIENT_UP) == 3 * 2 * 64 * 20
        assert result.ledger.total(Channel.CLIENT_DOWN) == 3 * 2 * 64 * 20
        assert result.ledger.total(Channel.ES_ES) == 0

    def test_quantization_is_deterministic(self):
        partition = scalar_partition([1.0, 3.0, -2.0, 6.0])
        clusters = assign_clusters(partition, 2)
        config = make_config(T=4, K=2, quantize_levels=3)
        a = run_hfl(config, QuadraticModel(1), partition, clusters)
        b = run_hfl(config, QuadraticModel(1), partition, clusters)
        assert_array_equal(a.w_final, b.w_final)
        assert a.ledger.total(Channel.ES_PS) == 4 * 2 * (32 + vector_bits(1, 3))


@pytest.mark.parametrize("T, Q", [(1, 1), (7, 320), (50, 96)])
def test_inter_tier_ordering(T, Q):
    partition = scalar_partition([float(n % 3) for n in range(20)])
    clusters = assign_clusters(partition, 4)
    config = make_config(T=T, K=1, Q=Q)
    fedchs = run_fedchs(config, QuadraticModel(1), partition, clusters, ring_graph(4))
    hfl = run_hfl(config, QuadraticModel(1), partition, clusters)
    fedavg = run_fedavg(config, QuadraticModel(1), partition)
    assert fedchs.ledger.total(Channel.ES_ES) == T * Q
    assert hfl.ledger.total(Channel.ES_PS) == 2 * T * 4 * Q
    assert fedavg.ledger.total(Channel.ES_PS) == 2 * T * 20 * Q
    assert T * Q < 2 * T * 4 * Q < 2 * T * 20 * Q


class TestRandomWalk:
    def test_single_client_is_sgd(self, quadratic_assignment):
        shard = quadratic_assignment.partition.shards[1]
        partition = single_client(shard)
        config = make_config(T=3, K=2, L=5.0, batch_size=2, seed=4)
        result = run_sfl_randomwalk(config, QuadraticModel(3), partition, path_graph(1))
        w, root = np.zeros(3), RandomStream(4)
        for t in range(3):
            for k in range(2):
                batch = draw_batch(shard, 2, root.substream("train", t, k, 0))
                w = w - config.schedule.rate(k) * batch_grad(QuadraticModel(3), w, batch)
        assert_array_equal(result.w_final, w)
        assert result.ledger.total(Channel.ES_ES) == 3 * 32

    def test_identical_shards_are_deterministic(self):
        partition = scalar_partition([1.5, 1.5])
        config = make_config(T=6, K=2, seed=8)
        a = run_sfl_randomwalk(config, QuadraticModel(1), partition, path_graph(2))
        b = run_sfl_randomwalk(config, QuadraticModel(1), partition, path_graph(2))
        assert a.cluster_sequence == b.cluster_sequence
        assert_array_equal(a.w_final, b.w_final)

    def test_needs_a_client_graph_of_matching_size(self):
        partition = scalar_partition([1.0, 2.0])
        with pytest.raises(ContractViolation):
            run_sfl_randomwalk(make_config(T=1, K=1), QuadraticModel(1), partition, path_graph(3))

    def test_walk_visits_ring_uniformly(self):
        hops = 10_000
        sequence = walk_sequence(ring_graph(5), 0, hops, RandomStream(21))
        counts = np.bincount(sequence[1:], minlength=5)
        sigma = np.sqrt(hops * 0.2 * 0.8)
        assert np.all(np.abs(counts - hops / 5) <= 4 * sigma)

    def test_walk_follows_edges(self):
        graph = ring_graph(6)
        sequence = walk_sequence(graph, 2, 50, RandomStream(1))
        assert all(b in graph.neighbors(a) for a, b in zip(sequence, sequence[1:]))
