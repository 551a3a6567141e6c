"""PID loops for the rudder-angle and thruster-speed controllers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class PidGains:
    kp: float
    ki: float = 0.0
    kd: float = 0.0

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0:
            raise InvalidInputError("gains must be non-negative")


@dataclass(frozen=True)
class ControllerGains:
    """Shipped defaults from a tuning run on the kinematic hull."""

    heading: PidGains = field(default_factory=lambda: PidGains(2.0, 0.0, 0.5))
    speed: PidGains = field(default_factory=lambda: PidGains(1.0, 0.2, 0.0))
    rudder_rate: float = 1.0      # rad/s slew
    throttle_rate: float = 0.5    # fraction/s slew
    integral_clamp: float = 5.0

    def __post_init__(self):
        if self.integral_clamp <= 0:
            raise InvalidInputError("integral clamp must be positive")


@dataclass
class PidState:
    integral: float = 0.0
    prev_error: float | None = None


def pid_step(state: PidState, error: float, gains: PidGains, dt: float,
             integral_clamp: float = math.inf,
             output_limits: tuple[float, float] | None = None,
             rate_limit: float | None = None,
             prev_output: float = 0.0) -> float:
    """One PID update with clamped integral and rate-limited output."""
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    state.integral = float(np.clip(state.integral + error * dt,
                                   -integral_clamp, integral_clamp))
    derivative = 0.0 if state.prev_error is None else (error - state.prev_error) / dt
    state.prev_error = error
    out = gains.kp * error + gains.ki * state.integral + gains.kd * derivative
    if rate_limit is not None:
        out = prev_output + float(np.clip(out - prev_output,
                                          -rate_limit * dt, rate_limit * dt))
    if output_limits is not None:
        out = float(np.clip(out, *output_limits))
    return out
