import logging
from dataclasses import dataclass, field

import numpy as np

from accounting import Channel, CostLedger
from data import ClusterAssignment, ClusterState, Partition
from errors import ContractViolation
from losses import LossModel, batch_grad
from numerics import ModelVector, RandomStream
from topology import EsGraph

from ..problem import Problem
from ..quantize import qsgd_quantize
from ..run_config import RunConfig
from ..schedule import Schedule
from ..shared.base_engine import BaseEngine, draw_batch
from ..trace import DriftRecord, RunResult

logger = logging.getLogger(__name__)


@dataclass
class RoundState:
    """Mutable state of the sequential loop: round t, active cluster m(t), w^t_k and visit counts c(m)."""

    t: int
    m_t: int
    w: ModelVector
    visit_counts: list[int]
    k: int = 0
    g_k: ModelVector | None = None
    drift: list[DriftRecord] = field(default_factory=list)


def local_update_step(
    w_k: ModelVector,
    cluster: ClusterState,
    model: LossModel,
    eta_k: float,
    stream: RandomStream,
    batch_size: int | None = None,
    quantize_levels: int | None = None,
) -> tuple[ModelVector, ModelVector]:
    """
    One in-cluster step: w_{k+1} = w_k − η_k·Σ_n γ_n^m ∇f(w_k, ξ_{n,k}).

    `stream` is the (round, step) stream; client n draws from its substream n.
    """
    if cluster.size == 0:
        raise ContractViolation(f"Cluster {cluster.index} has no clients")
    if eta_k <= 0:
        raise ContractViolation(f"Learning rate must be positive, got {eta_k}")
    g = np.zeros_like(w_k)
    for n, shard, gamma in zip(cluster.members, cluster.shards, cluster.weights):
        client_stream = stream.substream(n)
        grad = batch_grad(model, w_k, draw_batch(shard, batch_size, client_stream))
        if quantize_levels is not None:
            grad = qsgd_quantize(grad, quantize_levels, client_stream.substream("quantize"))
        g = g + gamma * grad
    return w_k - eta_k * g, g


def run_cluster_round(
    state: RoundState,
    cluster: ClusterState,
    model: LossModel,
    schedule: Schedule,
    ledger: CostLedger,
    stream: RandomStream,
    Q: int,
    batch_size: int | None = None,
    quantize_levels: int | None = None,
    upload_bits: int | None = None,
) -> RoundState:
    """K in-cluster steps with per-step broadcast/upload accounting and drift diagnostics."""
    if state.k != 0:
        raise ContractViolation(f"A round must start at step 0, not {state.k}")
    upload_bits = Q if upload_bits is None else upload_bits
    w_start = state.w
    weighted_sq = 0.0
    for k in range(schedule.K):
        ledger.record_transfer(state.t, Channel.CLIENT_DOWN, cluster.size * Q)
        eta = schedule.rate(k)
        state.w, state.g_k = local_update_step(
            state.w, cluster, model, eta, stream.substream("train", state.t, k),
            batch_size=batch_size, quantize_levels=quantize_levels,
        )
        ledger.record_transfer(state.t, Channel.CLIENT_UP, cluster.size * upload_bits)
        state.k = k + 1
        weighted_sq += eta**2 * float(state.g_k @ state.g_k)
        diff = w_start - state.w
        state.drift.append(DriftRecord(state.t, state.k, float(diff @ diff), state.k * weighted_sq))
    return state


def select_next_cluster(
    current: int,
    graph: EsGraph,
    visit_counts: list[int],
    cluster_masses: tuple[int, ...] | list[int],
) -> int:
    """
    Two-step rule: least-visited neighbors first, then the largest dataset
    D_{A,m'}; any remaining tie goes to the lowest cluster index.
    """
    neighbors = graph.neighbors(current)
    if not neighbors:
        raise ContractViolation(f"Cluster {current} has no neighbors")
    fewest = min(visit_counts[m] for m in neighbors)
    candidates = [m for m in neighbors if visit_counts[m] == fewest]
    if len(candidates) == 1:
        return candidates[0]
    return min(candidates, key=lambda m: (-cluster_masses[m], m))


class FedChsEngine(BaseEngine):
    """Sequential training over clusters: one active ES per round, model handed to a neighbor ES."""

    name = "fedchs"

    def run(self, config: RunConfig, problem: Problem, w0: ModelVector | None = None) -> RunResult:
        assignment = problem.assignment
        M = assignment.M
        if problem.graph.M != M:
            raise ContractViolation(f"Graph has {problem.graph.M} nodes for {M} clusters")
        root = RandomStream(config.seed)
        ledger = CostLedger()
        upload = self.upload_bits(config, problem)

        state = RoundState(
            t=0,
            m_t=int(root.substream("start").integers(0, M)),
            w=self.initial_model(config, problem, w0),
            visit_counts=[0] * M,
        )
        iterates = [state.w]
        trace, sequence = [], []
        logger.info("fedchs: T=%d K=%d M=%d start cluster %d", config.T, config.K, M, state.m_t)

        for t in range(config.T):
            state.t, state.k = t, 0
            record = self.record(t, state.m_t, state.w, problem, ledger)
            trace.append(record)
            self.log_progress(record, config.T)
            sequence.append(state.m_t)

            run_cluster_round(
                state, assignment.clusters[state.m_t], problem.model, config.schedule, ledger, root,
                config.Q, batch_size=config.batch_size, quantize_levels=config.quantize_levels,
                upload_bits=upload,
            )
            next_m = select_next_cluster(state.m_t, problem.graph, state.visit_counts, assignment.masses)
            logger.debug("fedchs round %d: %d -> %d (counts %s)", t, state.m_t, next_m, state.visit_counts)
            ledger.record_transfer(t, Channel.ES_ES, config.Q)
            state.visit_counts[next_m] += 1
            state.m_t = next_m
            iterates.append(state.w)

        final = self.record(config.T, state.m_t, state.w, problem, ledger)
        self.log_progress(final, config.T)
        return RunResult(
            algorithm=self.name,
            trace=trace,
            final=final,
            ledger=ledger,
            iterates=iterates,
            cluster_sequence=sequence,
            visit_counts=list(state.visit_counts),
            drift=state.drift,
        )


def run_fedchs(
    config: RunConfig,
    model: LossModel,
    partition: Partition,
    clusters: ClusterAssignment,
    graph: EsGraph,
    w_star: ModelVector | None = None,
    w0: ModelVector | None = None,
) -> RunResult:
    if clusters.partition.N != partition.N:
        raise ContractViolation("Cluster assignment and partition disagree on N")
    return FedChsEngine().run(config, Problem(model, clusters, graph, w_star=w_star), w0)
