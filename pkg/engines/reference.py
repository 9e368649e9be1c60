import logging

from losses import LossModel, Shard
from numerics import ModelVector

from .schedule import Schedule

logger = logging.getLogger(__name__)


def centralized_descent(
    model: LossModel,
    pooled: Shard,
    schedule: Schedule,
    T: int,
    w0: ModelVector,
) -> list[ModelVector]:
    """
    Full-batch gradient descent on the pooled dataset with the same step budget
    as T rounds of K steps; returns the iterate after every round (T + 1 entries).
    """
    pooled.require_nonempty("pooled dataset")
    w = w0
    iterates = [w]
    for _ in range(T):
        for k in range(schedule.K):
            _, grad = model.loss_and_grad(w, pooled.features, pooled.labels)
            w = w - schedule.rate(k) * grad
        iterates.append(w)
    logger.debug("centralized descent: %d steps on %d samples", T * schedule.K, len(pooled))
    return iterates
