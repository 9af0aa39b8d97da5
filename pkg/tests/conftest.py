import warnings

import numpy as np
import pytest

from ritzid import center
from ritzid.datagen import LowRankSpec, make_low_rank
from ritzid.oracle import spectrum_of

# C = diag(0.5, 2) for N = 3
DIAG_XC = np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]])


@pytest.fixture
def diag_op():
    return center(DIAG_XC, precentered=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_data(seed, n, d, spread=(0.5, 3.0)):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, d)) * np.linspace(*spread, d) + rng.standard_normal(d)


@pytest.fixture(scope="session")
def lowrank():
    """The 5000 x 500 effective-rank-30, tail-0.05 matrix and its oracle spectrum."""
    X = make_low_rank(LowRankSpec(5000, 500, 30, 0.05, seed=0))
    op = center(X)
    return X, op, spectrum_of(op)


@pytest.fixture(autouse=True)
def _quiet_exhausted():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="target variance", category=RuntimeWarning)
        yield
