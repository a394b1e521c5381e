import numpy as np
import pytest

from scatkernels.phasefn import HenyeyGreenstein, multimodal_example


@pytest.fixture(scope="session")
def hg095():
    return HenyeyGreenstein(0.95)


@pytest.fixture(scope="session")
def multimodal():
    return multimodal_example()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
