"""Shared fixtures for the liberation-lab test suite."""
import pytest

from liblab.cli.settings import ExperimentConfig
from liblab.ensembles.rng import SeededRng
from liblab.verify.report import random_trace_zero

TEST_SEED = 20240611


@pytest.fixture
def rng():
    return SeededRng(TEST_SEED)


@pytest.fixture
def generator():
    return SeededRng(TEST_SEED, stream_id=7).generator()


@pytest.fixture
def trace_zero_pair(generator):
    """Two independent trace-zero Gaussian 3x3 matrices."""
    return [random_trace_zero(3, generator).array for _ in range(2)]


@pytest.fixture
def make_config():
    """ExperimentConfig factory with small, fast defaults."""

    def factory(experiment, **overrides):
        settings = {"n": 16, "trials": 4, "seed": TEST_SEED, "workers": 1}
        settings.update(overrides)
        return ExperimentConfig(experiment, **settings)

    return factory
