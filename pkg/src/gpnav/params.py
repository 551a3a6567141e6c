"""Planner parameter bundle shared by the graph builder and the solver."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError


@dataclass(frozen=True)
class PlannerParams:
    """Knobs of the trajectory optimizer.

    ``safety_margin`` is the clearance (metres) below which the obstacle
    hinge activates; ``sigma_obs`` / ``sigma_env`` weight the obstacle and
    energy residuals (smaller = stronger); ``interp_scale`` multiplies the
    estimated obstacle fraction to pick the per-segment interpolated-state
    count, capped at ``interp_cap``. ``interpolation`` selects the
    Monte-Carlo count ("mc") or a constant count ("fixed").
    """

    safety_margin: float = 20.0
    sigma_obs: float = 0.05
    sigma_env: float = 0.005
    total_time: float = 2.0
    segments: int = 5
    qc_scale: float = 1.0
    interp_scale: float = 10.0
    mc_samples: int = 1000
    interp_cap: int = 50
    interpolation: str = "mc"
    fixed_interp: int = 10
    output_resolution: int = 64
    position_prior_sigma: float = 1e-4
    velocity_prior_sigma: float = 1e-2

    def __post_init__(self):
        if self.safety_margin < 0:
            raise InvalidInputError("safety_margin must be non-negative")
        if self.sigma_obs <= 0 or self.sigma_env <= 0:
            raise InvalidInputError("cost weights must be positive")
        if self.total_time <= 0 or self.segments < 1:
            raise InvalidInputError("need total_time > 0 and segments >= 1")
        if self.qc_scale <= 0:
            raise InvalidInputError("qc_scale must be positive")
        if self.interp_scale < 0 or self.interp_cap < 0 or self.mc_samples < 1:
            raise InvalidInputError("invalid interpolation parameters")
        if self.interpolation not in ("mc", "fixed"):
            raise InvalidInputError("interpolation must be 'mc' or 'fixed'")
        if self.fixed_interp < 0 or self.output_resolution < 1:
            raise InvalidInputError("invalid interpolation counts")
        if self.position_prior_sigma <= 0 or self.velocity_prior_sigma <= 0:
            raise InvalidInputError("prior sigmas must be positive")
