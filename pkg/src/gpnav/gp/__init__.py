"""Constant-velocity Gaussian-process trajectory prior."""
from .interpolation import interpolate, interpolation_coeffs
from .model import GpModel, PlannerState
from .prior import Whitener, gp_prior_error, noise_between, state_transition

__all__ = [
    "GpModel", "PlannerState", "state_transition", "noise_between",
    "gp_prior_error", "interpolate", "interpolation_coeffs", "Whitener",
]
