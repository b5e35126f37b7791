import numpy as np
import pytest

from zladder import ZEvaluator, build_ladder


@pytest.fixture(scope="session")
def ev():
    return ZEvaluator()


@pytest.fixture(scope="session")
def small_ladder(ev):
    """[1000, 1090] at tol 1e-9: covers T in [~925, ~1005] for U <= 2."""
    return build_ladder(ev, 1000.0, 1090.0, tol=1e-9)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260811)
