"""Nonlinear least-squares solver and the replanning loop."""
from .lm import LmResult, LmSettings, lm_solve
from .planner import (PlanResult, ReplanRecord, collision_check, densify, plan,
                      polyline_length, straight_line_states)

__all__ = [
    "LmResult", "LmSettings", "lm_solve", "PlanResult", "ReplanRecord",
    "collision_check", "densify", "plan", "polyline_length",
    "straight_line_states",
]
