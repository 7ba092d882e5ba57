import numpy as np
import pytest

from cascadelab.generate import half_two_three, sample_connected_cm
from cascadelab.graphs import MultiGraph
from cascadelab.removal import build_trace


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triangle():
    return MultiGraph(3, [[0, 1], [1, 2], [2, 0]])


@pytest.fixture
def small_trace(rng):
    g = sample_connected_cm(half_two_three(40), rng)
    return build_trace(g, rng)
