import numpy as np
import pytest

from phasefilter.grid import make_grid


@pytest.fixture(scope="session")
def desk():
    """Standard 1024-point grid over 64 slit widths."""
    return make_grid(1024, 0.0, 64.0)


@pytest.fixture(scope="session")
def small():
    return make_grid(256, 0.0, 32.0)


def sup(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
