import numpy as np
import pytest

from boundedconn.field import PrimeField

P61 = (1 << 61) - 1


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def f61():
    return PrimeField(P61)


@pytest.fixture(scope="session")
def f7():
    return PrimeField(7)
