"""Signed Euclidean distance fields over occupancy grids."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ..errors import InvalidInputError
from .bilinear import bilinear_sample
from .grid import OccupancyGrid, _freeze


@dataclass(frozen=True)
class SignedDistanceField:
    """Clearance raster: positive outside obstacles, negative inside.

    Values are metres from the cell centre to the nearest cell centre of the
    opposite occupancy class, capped at ``max_cap``.
    """

    values: np.ndarray
    max_cap: float
    cell_size: float = 1.0
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(np.asarray(self.values, dtype=float)))
        object.__setattr__(self, "origin", _freeze(np.asarray(self.origin, dtype=float)))

    def sample(self, points: np.ndarray):
        """Bilinear distance and gradient at world points; see bilinear_sample."""
        return bilinear_sample(self.values, self.cell_size, self.origin, points)


def compute_sdf(grid: OccupancyGrid, max_cap: float | None = None) -> SignedDistanceField:
    """Exact signed Euclidean distance transform of an occupancy grid.

    Combines the distance-to-obstacle transform of the free set with the
    negated distance-to-free transform of the obstacle set, then caps at
    ``max_cap`` (default: the larger map dimension in metres).
    """
    if grid.cells.size == 0:
        raise InvalidInputError("cannot build an SDF over an empty grid")
    if max_cap is None:
        max_cap = max(grid.width, grid.height) * grid.cell_size
    if max_cap <= 0:
        raise InvalidInputError("max_cap must be positive")

    occ = grid.cells != 0
    if not occ.any():
        values = np.full(occ.shape, float(max_cap))
    elif occ.all():
        values = np.full(occ.shape, -float(max_cap))
    else:
        dist_to_obstacle = ndimage.distance_transform_edt(~occ) * grid.cell_size
        dist_to_free = ndimage.distance_transform_edt(occ) * grid.cell_size
        values = np.clip(dist_to_obstacle - dist_to_free, -max_cap, max_cap)
    return SignedDistanceField(values=values, max_cap=float(max_cap),
                               cell_size=grid.cell_size, origin=grid.origin)
