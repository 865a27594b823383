import numpy as np
import pytest

from regalpha.harness import random_divfree_velocity, random_order_parameter
from regalpha.spectral import forward_transform, make_grid


@pytest.fixture(scope="session")
def grid16():
    return make_grid(16)


@pytest.fixture(scope="session")
def grid32():
    return make_grid(32)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


def taylor_green(grid):
    """Solenoidal steady Euler flow; its self-advection is a pure gradient."""
    u1 = np.cos(grid.x1) * np.sin(grid.x2)
    u2 = -np.sin(grid.x1) * np.cos(grid.x2)
    return forward_transform(np.stack((u1, u2)), grid)


def random_velocity(grid, seed, amplitude=1.0, kmax=4.0):
    return random_divfree_velocity(grid, seed, amplitude, kmax=kmax)


def random_scalar(grid, seed, mean=0.0, max_abs=0.8):
    return random_order_parameter(grid, seed, mean, max_abs)
