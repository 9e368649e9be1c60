import logging

from accounting import Channel, CostLedger
from data import ClusterAssignment, Partition
from errors import ContractViolation
from losses import LossModel
from numerics import ModelVector, RandomStream
from topology import path_graph

from ..problem import Problem
from ..run_config import RunConfig
from ..shared.base_engine import BaseEngine
from ..trace import RunResult
from .fedchs import RoundState, run_cluster_round

logger = logging.getLogger(__name__)


class HflEngine(BaseEngine):
    """
    Hierarchical local SGD with a central server: all clusters train K
    in-cluster steps from w^t in parallel branches, then the server averages
    the ES models with weights D_{A,m} / D_A (hierarchical local QSGD when
    `quantize_levels` is set).
    """

    name = "hfl"

    def run(self, config: RunConfig, problem: Problem, w0: ModelVector | None = None) -> RunResult:
        assignment = problem.assignment
        M = assignment.M
        total = sum(assignment.masses)
        cluster_weights = [mass / total for mass in assignment.masses]
        root = RandomStream(config.seed)
        ledger = CostLedger()
        upload = self.upload_bits(config, problem)
        w = self.initial_model(config, problem, w0)
        iterates, trace, drift = [w], [], []
        logger.info("hfl: T=%d K=%d M=%d", config.T, config.K, M)

        for t in range(config.T):
            record = self.record(t, None, w, problem, ledger)
            trace.append(record)
            self.log_progress(record, config.T)
            ledger.record_transfer(t, Channel.ES_PS, M * config.Q)

            aggregate = 0.0 if config.quantize_levels is None else w
            for cluster, weight in zip(assignment.clusters, cluster_weights):
                branch = RoundState(t=t, m_t=cluster.index, w=w, visit_counts=[0] * M)
                run_cluster_round(
                    branch, cluster, problem.model, config.schedule, ledger, root, config.Q,
                    batch_size=config.batch_size,
                )
                drift.extend(branch.drift)
                if config.quantize_levels is None:
                    aggregate = aggregate + weight * branch.w
                else:
                    delta = self.quantize(branch.w - w, config, root.substream("upload", t, cluster.index))
                    aggregate = aggregate + weight * delta
            ledger.record_transfer(t, Channel.ES_PS, M * upload)
            w = aggregate
            iterates.append(w)

        final = self.record(config.T, None, w, problem, ledger)
        self.log_progress(final, config.T)
        return RunResult(algorithm=self.name, trace=trace, final=final, ledger=ledger, iterates=iterates, drift=drift)


def run_hfl(
    config: RunConfig,
    model: LossModel,
    partition: Partition,
    clusters: ClusterAssignment,
    w_star: ModelVector | None = None,
    w0: ModelVector | None = None,
) -> RunResult:
    if clusters.partition.N != partition.N:
        raise ContractViolation("Cluster assignment and partition disagree on N")
    return HflEngine().run(config, Problem(model, clusters, path_graph(clusters.M), w_star=w_star), w0)
