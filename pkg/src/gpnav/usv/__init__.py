"""Kinematic catamaran simulator: guidance, autopilot, mission analytics."""
from .control import ControllerGains, PidGains, PidState, pid_step
from .guidance import from_compass, heading_error, refine_heading, to_compass, wrap_pi
from .mission import MissionLog, run_mission
from .vessel import MAX_SPEED, ActuatorModel, VesselState, step_kinematics, wrap_compass

__all__ = [
    "VesselState", "ActuatorModel", "step_kinematics", "wrap_compass", "MAX_SPEED",
    "refine_heading", "to_compass", "from_compass", "wrap_pi", "heading_error",
    "PidGains", "PidState", "ControllerGains", "pid_step", "MissionLog",
    "run_mission",
]
