import numpy as np
import pytest

from framekit import Frame
from framekit.construct import mercedes_benz

EXAMPLE6 = [[3, 0], [2, 0], [1, 0], [1, 1], [0, 1], [1, -1]]


@pytest.fixture
def example6():
    """Six vectors in R^2, three of them on the x-axis."""
    return Frame(np.array(EXAMPLE6, dtype=float))


@pytest.fixture
def mb():
    return mercedes_benz()


@pytest.fixture
def onb2():
    return Frame(np.eye(2))


@pytest.fixture
def doubled_basis():
    return Frame(np.array([[1, 0], [0, 1], [1, 0], [0, 1]], dtype=float))


def same_up_to_phase(u, v, atol=1e-10):
    u, v = np.asarray(u), np.asarray(v)
    phase = np.vdot(v, u)
    if abs(phase) < 1e-14:
        return np.allclose(u, v, atol=atol)
    return np.allclose(u, v * phase / abs(phase), atol=atol)
