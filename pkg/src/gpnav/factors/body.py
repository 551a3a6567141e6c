"""Planar robot body approximated by a set of circles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..fields.grid import _freeze


@dataclass(frozen=True)
class BodyModel:
    """Circles fixed to the body frame: offsets (M, 2) metres, radii (M,).

    Offsets are applied untransformed (the planner state carries no heading),
    which is exact for the single-circle hulls shipped here.
    """

    offsets: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        offsets = np.atleast_2d(np.asarray(self.offsets, dtype=float))
        radii = np.atleast_1d(np.asarray(self.radii, dtype=float))
        if offsets.shape[0] != radii.shape[0] or offsets.shape[0] < 1:
            raise InvalidInputError("body needs at least one circle with matching radii")
        if np.any(radii <= 0):
            raise InvalidInputError("circle radii must be positive")
        object.__setattr__(self, "offsets", _freeze(offsets))
        object.__setattr__(self, "radii", _freeze(radii))

    @property
    def count(self) -> int:
        return self.radii.size

    def centers(self, position: np.ndarray) -> np.ndarray:
        """World-frame circle centres for a body at ``position`` (2,)."""
        return np.asarray(position, dtype=float) + self.offsets

    @classmethod
    def single_circle(cls, radius: float = 3.0) -> "BodyModel":
        return cls(offsets=np.zeros((1, 2)), radii=np.array([radius]))
