"""Raster workspace descriptions: occupancy, clearance and current fields."""
from .bilinear import bilinear_sample, query_bilinear
from .environment import (EnvironmentField, VortexSpec, energy_rate_from_current,
                          synth_vortex_field, vortex_velocity)
from .grid import OccupancyGrid, export_csv
from .sdf import SignedDistanceField, compute_sdf
from .workspace import Workspace

__all__ = [
    "OccupancyGrid", "SignedDistanceField", "EnvironmentField", "VortexSpec",
    "Workspace", "compute_sdf", "synth_vortex_field", "energy_rate_from_current",
    "vortex_velocity", "bilinear_sample", "query_bilinear", "export_csv",
]
