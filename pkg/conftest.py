import numpy as np
import pytest

from data import DatasetSpec, assign_clusters, dirichlet_partition, generate_dataset
from losses.default import LogisticModel, QuadraticModel
from numerics import RandomStream


@pytest.fixture
def stream():
    return RandomStream(1234)


@pytest.fixture
def regression_dataset():
    spec = DatasetSpec(kind="linear-regression", total_size=400, d_in=3, noise=0.0, class_count=4)
    return generate_dataset(spec, RandomStream(7).substream("dataset"))


@pytest.fixture
def blobs_dataset():
    spec = DatasetSpec(kind="gaussian-blobs-binary", total_size=400, d_in=3)
    return generate_dataset(spec, RandomStream(7).substream("dataset"))


@pytest.fixture
def quadratic_assignment(regression_dataset):
    partition = dirichlet_partition(regression_dataset, 8, 1.0, RandomStream(7).substream("partition"))
    return assign_clusters(partition, 4, "contiguous")


@pytest.fixture
def logistic_assignment(blobs_dataset):
    partition = dirichlet_partition(blobs_dataset, 8, 1.0, RandomStream(7).substream("partition"))
    return assign_clusters(partition, 4, "contiguous")


@pytest.fixture
def quadratic_model():
    return QuadraticModel(3)


@pytest.fixture
def logistic_model():
    return LogisticModel(3, mu_reg=0.05)
