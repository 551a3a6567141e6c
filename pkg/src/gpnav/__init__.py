"""Trajectory planning over obstacle and current fields for surface vessels."""

__version__ = "0.1.0"

from .errors import (GpnavError, InvalidInputError, InvalidIntervalError,
                     NumericalConditioningError, PlanningFailedError)
from .params import PlannerParams

__all__ = [
    "__version__", "PlannerParams", "GpnavError", "InvalidInputError",
    "InvalidIntervalError", "NumericalConditioningError", "PlanningFailedError",
]
