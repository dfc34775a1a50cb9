import numpy as np
import pytest

from halfstable import StableParams


@pytest.fixture(scope="session")
def p_generic():
    """The asymmetric workhorse parameter set used across the suite."""
    return StableParams(1.5, 0.55)


@pytest.fixture(scope="session")
def p_symmetric():
    return StableParams(1.5, 0.5)


@pytest.fixture(scope="session")
def p_brownian():
    return StableParams(2.0, 0.5)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260814)
