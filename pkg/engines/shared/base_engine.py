import logging

import numpy as np

from accounting import CostLedger, vector_bits
from losses import LossModel, Shard, batch_grad
from numerics import ModelVector, RandomStream

from ..problem import Problem
from ..quantize import qsgd_quantize
from ..run_config import RunConfig
from ..schedule import Schedule
from ..trace import TraceRecord

logger = logging.getLogger(__name__)


def draw_batch(shard: Shard, batch_size: int | None, stream: RandomStream) -> Shard:
    """ξ: `batch_size` samples uniformly without replacement, or the whole shard."""
    if batch_size is None or batch_size >= len(shard):
        return shard
    return shard.take(stream.choice_without_replacement(len(shard), batch_size))


def local_sgd(
    model: LossModel,
    w: ModelVector,
    shard: Shard,
    schedule: Schedule,
    batch_size: int | None,
    stream: RandomStream,
    t: int,
    client: int,
) -> ModelVector:
    """K plain SGD steps on one client; step k draws from substream (train, t, k, client)."""
    for k in range(schedule.K):
        client_stream = stream.substream("train", t, k, client)
        batch = draw_batch(shard, batch_size, client_stream)
        w = w - schedule.rate(k) * batch_grad(model, w, batch)
    return w


class BaseEngine:
    """
    Shared plumbing for the training engines:

      - Subclasses implement `run()`; this base class builds the root stream,
        the initial model, the per-round trace records and the progress log.
    """

    name = "base"

    def __repr__(self):
        return f"{type(self).__name__}()"

    def initial_model(self, config: RunConfig, problem: Problem, w0: ModelVector | None) -> ModelVector:
        if w0 is not None:
            w0 = np.array(w0, dtype=np.float64)
            problem.check_vector(w0)
            return w0
        stream = RandomStream(config.seed).substream("init")
        return problem.model.initial_vector(config.init_scale, stream)

    def upload_bits(self, config: RunConfig, problem: Problem) -> int:
        if config.quantize_levels is None:
            return config.Q
        return vector_bits(problem.dim, config.quantize_levels)

    def quantize(self, v: ModelVector, config: RunConfig, stream: RandomStream) -> ModelVector:
        if config.quantize_levels is None:
            return v
        return qsgd_quantize(v, config.quantize_levels, stream.substream("quantize"))

    def record(
        self,
        t: int,
        cluster: int | None,
        w: ModelVector,
        problem: Problem,
        ledger: CostLedger,
    ) -> TraceRecord:
        loss, grad = problem.global_loss_and_grad(w)
        gap = None if problem.f_star is None else loss - problem.f_star
        return TraceRecord(
            t=t,
            cluster=cluster,
            loss=loss,
            grad_sq_norm=float(grad @ grad),
            gap=gap,
            bits=ledger.snapshot(),
            accuracy=problem.accuracy(w),
        )

    def log_progress(self, record: TraceRecord, T: int) -> None:
        every = max(1, T // 10)
        if record.t % every == 0 or record.t == T:
            logger.info(
                "%s round %d/%d cluster=%s loss=%.6g grad_sq=%.3g",
                self.name, record.t, T, record.cluster, record.loss, record.grad_sq_norm,
            )
