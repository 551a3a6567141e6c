"""Synthetic current fields and the derived energy-consumption-rate raster."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import InvalidInputError
from .bilinear import bilinear_sample
from .grid import _freeze


@dataclass(frozen=True)
class VortexSpec:
    """One circular vortex: tangential speed peaks near ``core_radius``.

    ``circulation`` is in m^2/s; its sign sets the rotation direction
    (positive = counter-clockwise).
    """

    center: tuple[float, float]
    circulation: float
    core_radius: float

    def __post_init__(self):
        if self.core_radius <= 0:
            raise InvalidInputError("vortex core_radius must be positive")


@dataclass(frozen=True)
class EnvironmentField:
    """Per-cell ambient current (m/s) and normalized energy rate in [0, 1]."""

    current: np.ndarray      # (H, W, 2)
    energy_rate: np.ndarray  # (H, W)
    cell_size: float = 1.0
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        cur = np.asarray(self.current, dtype=float)
        if cur.ndim != 3 or cur.shape[2] != 2:
            raise InvalidInputError("current raster must have shape (H, W, 2)")
        object.__setattr__(self, "current", _freeze(cur))
        object.__setattr__(self, "energy_rate", _freeze(np.asarray(self.energy_rate, dtype=float)))
        object.__setattr__(self, "origin", _freeze(np.asarray(self.origin, dtype=float)))

    @property
    def values(self) -> np.ndarray:
        # scalar raster exposed for query_bilinear-style access
        return self.energy_rate

    def sample_energy(self, points: np.ndarray):
        return bilinear_sample(self.energy_rate, self.cell_size, self.origin, points)

    def sample_current(self, points: np.ndarray) -> np.ndarray:
        ue, _, _ = bilinear_sample(self.current[:, :, 0], self.cell_size, self.origin, points)
        un, _, _ = bilinear_sample(self.current[:, :, 1], self.cell_size, self.origin, points)
        return np.stack([ue, un], axis=1)

    @classmethod
    def zero(cls, shape: tuple[int, int], cell_size: float = 1.0,
             origin=(0.0, 0.0)) -> "EnvironmentField":
        h, w = shape
        return cls(current=np.zeros((h, w, 2)), energy_rate=np.zeros((h, w)),
                   cell_size=cell_size, origin=np.asarray(origin, float))


def vortex_velocity(spec: VortexSpec, points: np.ndarray) -> np.ndarray:
    """Velocity of one regularized vortex at world points, shape (n, 2).

    Tangential speed |G| / (2 pi r) * (1 - exp(-r^2 / rc^2)); smooth and zero
    at the core centre.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts - np.asarray(spec.center, dtype=float)
    r2 = np.einsum("ij,ij->i", d, d)
    rc2 = spec.core_radius ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(r2 > 0.0,
                          -np.expm1(-r2 / rc2) / r2,
                          1.0 / rc2) * (spec.circulation / (2.0 * np.pi))
    return np.stack([-d[:, 1] * factor, d[:, 0] * factor], axis=1)


def synth_vortex_field(vortices: Sequence[VortexSpec], shape: tuple[int, int],
                       cell_size: float = 1.0, origin=(0.0, 0.0),
                       max_speed: float = 2.0) -> EnvironmentField:
    """Superpose vortices on a raster and derive the energy-rate field.

    Per-cell current magnitude is clamped to ``max_speed``.
    """
    h, w = int(shape[0]), int(shape[1])
    if h <= 0 or w <= 0:
        raise InvalidInputError("field shape must be positive")
    origin = np.asarray(origin, dtype=float)
    cols, rows = np.meshgrid(np.arange(w), np.arange(h))
    centers = origin + np.stack([cols, rows], axis=-1).reshape(-1, 2) * cell_size

    current = np.zeros((h * w, 2))
    for spec in vortices:
        current += vortex_velocity(spec, centers)

    speed = np.linalg.norm(current, axis=1)
    over = speed > max_speed
    if over.any():
        current[over] *= (max_speed / speed[over])[:, None]
    current = current.reshape(h, w, 2)
    return EnvironmentField(current=current,
                            energy_rate=energy_rate_from_current(current),
                            cell_size=cell_size, origin=origin)


def energy_rate_from_current(current: np.ndarray) -> np.ndarray:
    """Normalized current magnitude: |u| / max |u|, all zeros for a still field."""
    current = np.asarray(current, dtype=float)
    if not np.isfinite(current).all():
        raise InvalidInputError("current field must be finite")
    mag = np.linalg.norm(current, axis=-1)
    peak = mag.max() if mag.size else 0.0
    if peak <= 0.0:
        return np.zeros_like(mag)
    return mag / peak
