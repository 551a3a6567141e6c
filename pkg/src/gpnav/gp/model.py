"""Constant-velocity trajectory prior: state layout and model parameters."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from ..fields.grid import _freeze


@dataclass(frozen=True)
class PlannerState:
    """Stacked position/velocity trajectory variable."""

    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        vel = np.asarray(self.velocity, dtype=float)
        if pos.shape != vel.shape or pos.ndim != 1:
            raise InvalidInputError("position and velocity must be equal-length vectors")
        if not (np.isfinite(pos).all() and np.isfinite(vel).all()):
            raise InvalidInputError("state entries must be finite")
        object.__setattr__(self, "position", _freeze(pos))
        object.__setattr__(self, "velocity", _freeze(vel))

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity])

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "PlannerState":
        vec = np.asarray(vec, dtype=float)
        d = vec.size // 2
        return cls(position=vec[:d], velocity=vec[d:])


@dataclass(frozen=True)
class GpModel:
    """Power-spectral density and support-state timing of the prior."""

    qc: np.ndarray          # (D, D) symmetric positive definite
    timestamps: np.ndarray  # (N+1,) strictly increasing

    def __post_init__(self):
        qc = np.asarray(self.qc, dtype=float)
        ts = np.asarray(self.timestamps, dtype=float)
        if qc.ndim != 2 or qc.shape[0] != qc.shape[1]:
            raise InvalidInputError("qc must be a square matrix")
        if not np.allclose(qc, qc.T):
            raise InvalidInputError("qc must be symmetric")
        if np.any(np.linalg.eigvalsh(qc) <= 0):
            raise InvalidInputError("qc must be positive definite")
        if ts.ndim != 1 or ts.size < 2 or np.any(np.diff(ts) <= 0):
            raise InvalidInputError("timestamps must be strictly increasing, length >= 2")
        object.__setattr__(self, "qc", _freeze(qc))
        object.__setattr__(self, "timestamps", _freeze(ts))

    @property
    def dim(self) -> int:
        return self.qc.shape[0]

    @property
    def state_dim(self) -> int:
        return 2 * self.dim

    @property
    def support_count(self) -> int:
        return self.timestamps.size

    @property
    def segments(self) -> int:
        return self.timestamps.size - 1

    @property
    def total_time(self) -> float:
        return float(self.timestamps[-1] - self.timestamps[0])

    @classmethod
    def uniform(cls, dim: int, qc_scale: float, total_time: float,
                segments: int) -> "GpModel":
        """Uniformly spaced support states on [0, total_time]."""
        if total_time <= 0 or segments < 1:
            raise InvalidInputError("total_time must be positive and segments >= 1")
        return cls(qc=qc_scale * np.eye(dim),
                   timestamps=np.linspace(0.0, total_time, segments + 1))
