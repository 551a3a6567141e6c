"""Bundle of the precomputed rasters a planning run needs."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .environment import EnvironmentField, VortexSpec, synth_vortex_field
from .grid import OccupancyGrid
from .sdf import SignedDistanceField, compute_sdf


@dataclass(frozen=True)
class Workspace:
    """Occupancy grid plus its derived clearance and environment fields."""

    grid: OccupancyGrid
    sdf: SignedDistanceField
    env: EnvironmentField
    precompute_s: float = 0.0

    @classmethod
    def build(cls, grid: OccupancyGrid, vortices: Sequence[VortexSpec] = (),
              max_current: float = 2.0, sdf_cap: float | None = None) -> "Workspace":
        t0 = time.perf_counter()
        sdf = compute_sdf(grid, max_cap=sdf_cap)
        if vortices:
            env = synth_vortex_field(vortices, (grid.height, grid.width),
                                     cell_size=grid.cell_size, origin=grid.origin,
                                     max_speed=max_current)
        else:
            env = EnvironmentField.zero((grid.height, grid.width),
                                        cell_size=grid.cell_size, origin=grid.origin)
        return cls(grid=grid, sdf=sdf, env=env,
                   precompute_s=time.perf_counter() - t0)
