import logging

from accounting import Channel, CostLedger
from data import Partition, assign_clusters
from errors import ContractViolation
from losses import LossModel
from numerics import ModelVector, RandomStream
from topology import EsGraph, path_graph

from ..problem import Problem
from ..run_config import RunConfig
from ..shared.base_engine import BaseEngine, local_sgd
from ..trace import RunResult

logger = logging.getLogger(__name__)


def walk_sequence(graph: EsGraph, start: int, hops: int, stream: RandomStream) -> list[int]:
    """Nodes visited by a uniform random walk: `start` followed by `hops` neighbor draws."""
    if not 0 <= start < graph.M:
        raise ContractViolation(f"Start node {start} outside 0..{graph.M - 1}")
    sequence = [start]
    for hop in range(hops):
        neighbors = graph.neighbors(sequence[-1])
        if not neighbors:
            raise ContractViolation(f"Node {sequence[-1]} has no neighbors")
        pick = int(stream.substream("walk", hop).integers(0, len(neighbors)))
        sequence.append(neighbors[pick])
    return sequence


class RandomWalkEngine(BaseEngine):
    """Sequential FL without servers: the model walks client to client, K local SGD steps per visit."""

    name = "sfl-rw"

    def run(self, config: RunConfig, problem: Problem, w0: ModelVector | None = None) -> RunResult:
        partition = problem.partition
        graph = problem.client_graph
        if graph is None or graph.M != partition.N:
            raise ContractViolation(f"Random walk needs a graph over the {partition.N} clients")
        root = RandomStream(config.seed)
        ledger = CostLedger()
        start = int(root.substream("start").integers(0, partition.N))
        sequence = walk_sequence(graph, start, config.T, root)
        visits = [0] * partition.N
        w = self.initial_model(config, problem, w0)
        iterates, trace = [w], []
        logger.info("sfl-rw: T=%d K=%d N=%d start client %d", config.T, config.K, partition.N, start)

        for t in range(config.T):
            client = sequence[t]
            record = self.record(t, client, w, problem, ledger)
            trace.append(record)
            self.log_progress(record, config.T)
            visits[client] += 1
            w = local_sgd(
                problem.model, w, partition.shards[client], config.schedule, config.batch_size, root, t, client
            )
            ledger.record_transfer(t, Channel.ES_ES, config.Q)
            iterates.append(w)

        final = self.record(config.T, sequence[config.T], w, problem, ledger)
        self.log_progress(final, config.T)
        return RunResult(
            algorithm=self.name,
            trace=trace,
            final=final,
            ledger=ledger,
            iterates=iterates,
            cluster_sequence=sequence[: config.T],
            visit_counts=visits,
        )


def run_sfl_randomwalk(
    config: RunConfig,
    model: LossModel,
    partition: Partition,
    client_graph: EsGraph,
    w_star: ModelVector | None = None,
    w0: ModelVector | None = None,
) -> RunResult:
    problem = Problem(model, assign_clusters(partition, 1), path_graph(1), client_graph=client_graph, w_star=w_star)
    return RandomWalkEngine().run(config, problem, w0)
