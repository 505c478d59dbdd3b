import numpy as np
import pytest

from tbdkit.spinor_algebra import build_gammas


@pytest.fixture(scope="session")
def dirac():
    return build_gammas("dirac")


@pytest.fixture(scope="session")
def weyl():
    return build_gammas("weyl")


@pytest.fixture(params=["dirac", "weyl"])
def gammas(request):
    return build_gammas(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
