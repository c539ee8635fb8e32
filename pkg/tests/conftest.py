import numpy as np
import pytest

from src.construction.stepper import default_stein, place_exactly


@pytest.fixture(scope="session")
def exact_stein():
    """Four-level exact placement on a Stein decomposition."""
    D = default_stein(4)
    return D, place_exactly(D, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
