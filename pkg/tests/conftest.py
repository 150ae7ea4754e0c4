import numpy as np
import pytest

from bsa.params import PendulumParams


@pytest.fixture
def par():
    return PendulumParams()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
