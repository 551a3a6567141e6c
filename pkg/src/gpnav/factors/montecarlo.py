"""Monte-Carlo estimation of the obstacle fraction of a sampling region."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..fields.grid import OccupancyGrid


@dataclass(frozen=True)
class McEstimate:
    """Result of one obstacle-fraction estimate.

    ``p_obs`` is the fraction of the region inside obstacles; ``n_accepted``
    counts the collision-free draws, so ``p_obs = 1 - n_accepted / n_samples``.
    """

    p_obs: float
    n_samples: int
    n_accepted: int
    seed: int | None = None

    def __post_init__(self):
        if not (0 <= self.n_accepted <= self.n_samples):
            raise InvalidInputError("accepted count outside [0, n_samples]")
        if not (0.0 <= self.p_obs <= 1.0):
            raise InvalidInputError("p_obs outside [0, 1]")


def _clip_bounds(grid: OccupancyGrid, bounds):
    lo_g, hi_g = grid.extent()
    if bounds is None:
        return lo_g, hi_g
    lo = np.maximum(np.asarray(bounds[0], dtype=float), lo_g)
    hi = np.minimum(np.asarray(bounds[1], dtype=float), hi_g)
    if np.any(hi <= lo):
        raise InvalidInputError("sampling region is empty after clipping to the map")
    return lo, hi


def estimate_obstacle_fraction(grid: OccupancyGrid, bounds=None, n_samples: int = 1000,
                               rng=None) -> McEstimate:
    """Uniform continuous sampling of a region; counts free-space acceptances.

    ``bounds`` is an axis-aligned ``(lo, hi)`` box in world metres (default:
    the whole map), clipped to the map extent. Deterministic for a fixed seed.
    """
    if n_samples < 1:
        raise InvalidInputError("n_samples must be >= 1")
    lo, hi = _clip_bounds(grid, bounds)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    points = rng.uniform(lo, hi, size=(n_samples, 2))
    n_accepted = int((~grid.occupied_at(points)).sum())
    return McEstimate(p_obs=1.0 - n_accepted / n_samples, n_samples=n_samples,
                      n_accepted=n_accepted, seed=seed)


def exact_obstacle_fraction(grid: OccupancyGrid, bounds=None) -> McEstimate:
    """Traversal limit of the estimator: visit every cell centre in the region."""
    lo, hi = _clip_bounds(grid, bounds)
    c0 = int(np.ceil((lo[0] - grid.origin[0]) / grid.cell_size))
    c1 = int(np.floor((hi[0] - grid.origin[0]) / grid.cell_size))
    r0 = int(np.ceil((lo[1] - grid.origin[1]) / grid.cell_size))
    r1 = int(np.floor((hi[1] - grid.origin[1]) / grid.cell_size))
    c0, c1 = max(c0, 0), min(c1, grid.width - 1)
    r0, r1 = max(r0, 0), min(r1, grid.height - 1)
    if c1 < c0 or r1 < r0:
        raise InvalidInputError("sampling region contains no cell centres")
    patch = grid.cells[r0:r1 + 1, c0:c1 + 1]
    n = patch.size
    n_accepted = int(n - patch.sum())
    return McEstimate(p_obs=1.0 - n_accepted / n, n_samples=n, n_accepted=n_accepted)
