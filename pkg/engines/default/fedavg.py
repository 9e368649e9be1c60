import logging

from accounting import Channel, CostLedger
from data import Partition, assign_clusters
from losses import LossModel
from numerics import ModelVector, RandomStream
from topology import path_graph

from ..problem import Problem
from ..run_config import RunConfig
from ..shared.base_engine import BaseEngine, local_sgd
from ..trace import RunResult

logger = logging.getLogger(__name__)


class FedAvgEngine(BaseEngine):
    """
    Federated averaging: every client runs K local SGD steps from w^t and the
    server averages with γ_n = D_n / D_A. With `quantize_levels` set, clients
    upload QSGD-compressed updates w_n − w^t instead of their models.
    """

    name = "fedavg"

    def run(self, config: RunConfig, problem: Problem, w0: ModelVector | None = None) -> RunResult:
        partition = problem.partition
        root = RandomStream(config.seed)
        ledger = CostLedger()
        upload = self.upload_bits(config, problem)
        w = self.initial_model(config, problem, w0)
        iterates, trace = [w], []
        logger.info("fedavg: T=%d K=%d N=%d", config.T, config.K, partition.N)

        for t in range(config.T):
            record = self.record(t, None, w, problem, ledger)
            trace.append(record)
            self.log_progress(record, config.T)
            ledger.record_transfer(t, Channel.ES_PS, partition.N * config.Q)

            aggregate = 0.0 if config.quantize_levels is None else w
            for n, (shard, gamma) in enumerate(zip(partition.shards, partition.weights)):
                w_n = local_sgd(problem.model, w, shard, config.schedule, config.batch_size, root, t, n)
                if config.quantize_levels is None:
                    aggregate = aggregate + gamma * w_n
                else:
                    aggregate = aggregate + gamma * self.quantize(w_n - w, config, root.substream("upload", t, n))
            ledger.record_transfer(t, Channel.ES_PS, partition.N * upload)
            w = aggregate
            iterates.append(w)

        final = self.record(config.T, None, w, problem, ledger)
        self.log_progress(final, config.T)
        return RunResult(algorithm=self.name, trace=trace, final=final, ledger=ledger, iterates=iterates)


def run_fedavg(
    config: RunConfig,
    model: LossModel,
    partition: Partition,
    w_star: ModelVector | None = None,
    w0: ModelVector | None = None,
) -> RunResult:
    problem = Problem(model, assign_clusters(partition, 1), path_graph(1), w_star=w_star)
    return FedAvgEngine().run(config, problem, w0)
