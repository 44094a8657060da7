import numpy as np
import pytest

MASTER_SEED = 1234


@pytest.fixture
def rng():
    return np.random.default_rng(MASTER_SEED)
