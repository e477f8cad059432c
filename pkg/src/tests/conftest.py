"""Shared fixtures."""
import numpy as np
import pytest

from domain.entities import Grid
from domain.value_objects import rng_for


@pytest.fixture
def rng() -> np.random.Generator:
    return rng_for(20240501)


@pytest.fixture
def two_cell_grid() -> Grid:
    """1D grid of two cells on [0, 1], h = 0.5."""
    return Grid(nx=2)


@pytest.fixture
def loop_grid() -> Grid:
    """2D grid of 2x2 cells, the smallest carrying a divergence-free field."""
    return Grid(nx=2, ny=2)
