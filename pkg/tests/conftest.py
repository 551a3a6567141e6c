import numpy as np
import pytest

from gpnav.fields import OccupancyGrid, Workspace


@pytest.fixture
def empty_grid_64():
    return OccupancyGrid(np.zeros((64, 64), dtype=np.uint8))


@pytest.fixture
def disc_grid_64():
    """64 x 64 map with one disc obstacle left of centre."""
    cells = np.zeros((64, 64), dtype=np.uint8)
    cols, rows = np.meshgrid(np.arange(64), np.arange(64))
    cells[(cols - 30) ** 2 + (rows - 34) ** 2 <= 8 ** 2] = 1
    return OccupancyGrid(cells)


@pytest.fixture
def disc_workspace(disc_grid_64):
    return Workspace.build(disc_grid_64)


def random_grid(rng, shape=(32, 32), density=0.25):
    cells = (rng.random(shape) < density).astype(np.uint8)
    return OccupancyGrid(cells)
