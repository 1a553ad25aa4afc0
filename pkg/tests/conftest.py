import numpy as np
import pytest

from detpi.states import RngStream, haar_unitary, random_density


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(scope="session")
def random_states():
    """200 Ginibre states, 50 of each rank 1-4."""
    return [random_density(i % 4 + 1, RngStream(7, i)) for i in range(200)]


def random_local_unitary(gen):
    return np.kron(haar_unitary(2, gen), haar_unitary(2, gen))
