"""3-DOF catamaran kinematics with first-order actuator lags.

Frames follow the north-east-down compass convention: heading psi is
measured clockwise from north and normalized into (0, 2*pi]; surge u points
along the bow. Ground velocity therefore is

    E_dot = u sin(psi) + v cos(psi) + current_E
    N_dot = u cos(psi) - v sin(psi) + current_N
    psi_dot = r

Hull hydrodynamics are replaced by first-order responses: commanded thruster
fraction drives surge towards ``throttle * max_speed`` and commanded rudder
deflection drives the yaw rate towards ``yaw_gain * rudder``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import InvalidInputError

MAX_SPEED = 10.0  # m/s, hull limit


def wrap_compass(angle: float) -> float:
    """Normalize an angle into (0, 2*pi]."""
    wrapped = angle % (2.0 * math.pi)
    return 2.0 * math.pi if wrapped == 0.0 else wrapped


@dataclass(frozen=True)
class ActuatorModel:
    surge_tc: float = 2.0                    # s, throttle-to-surge lag
    yaw_tc: float = 1.0                      # s, rudder-to-yaw-rate lag
    yaw_gain: float = 0.5                    # (rad/s) per rad of rudder
    max_rudder: float = math.radians(35.0)   # rad
    max_speed: float = MAX_SPEED             # m/s


@dataclass(frozen=True)
class VesselState:
    e: float = 0.0        # east, m
    n: float = 0.0        # north, m
    psi: float = 2.0 * math.pi  # heading, (0, 2*pi]
    u: float = 0.0        # surge, m/s
    v: float = 0.0        # sway, m/s
    r: float = 0.0        # yaw rate, rad/s
    rudder: float = 0.0   # rad
    throttle: float = 0.0  # fraction of max thrust, [0, 1]

    def __post_init__(self):
        object.__setattr__(self, "psi", wrap_compass(self.psi))
        if math.hypot(self.u, self.v) > MAX_SPEED + 1e-9:
            raise InvalidInputError("speed exceeds the hull limit")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.e, self.n])

    @property
    def speed(self) -> float:
        return math.hypot(self.u, self.v)


def step_kinematics(state: VesselState, rudder_cmd: float, throttle_cmd: float,
                    current=None, dt: float = 0.01,
                    actuators: ActuatorModel | None = None) -> VesselState:
    """One explicit 4th-order (RK4) integration step.

    ``current`` is either None, a constant (2,) east/north drift, or a
    callable mapping an (n, 2) position array to an (n, 2) current array.
    Commands are clamped to the actuator envelope and held over the step.
    """
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    act = actuators or ActuatorModel()
    rudder_cmd = float(np.clip(rudder_cmd, -act.max_rudder, act.max_rudder))
    throttle_cmd = float(np.clip(throttle_cmd, 0.0, 1.0))

    if current is None:
        def current_at(p):
            return np.zeros(2)
    elif callable(current):
        def current_at(p):
            return np.asarray(current(p[None, :]), dtype=float).reshape(-1)[:2]
    else:
        drift = np.asarray(current, dtype=float)

        def current_at(p):
            return drift

    v_sway = state.v  # no sway dynamics in the kinematic hull

    def deriv(y):
        e, n, psi, u, r = y
        cur = current_at(np.array([e, n]))
        return np.array([
            u * math.sin(psi) + v_sway * math.cos(psi) + cur[0],
            u * math.cos(psi) - v_sway * math.sin(psi) + cur[1],
            r,
            (throttle_cmd * act.max_speed - u) / act.surge_tc,
            (act.yaw_gain * rudder_cmd - r) / act.yaw_tc,
        ])

    y0 = np.array([state.e, state.n, state.psi, state.u, state.r])
    k1 = deriv(y0)
    k2 = deriv(y0 + 0.5 * dt * k1)
    k3 = deriv(y0 + 0.5 * dt * k2)
    k4 = deriv(y0 + dt * k3)
    y = y0 + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    u_new = min(y[3], act.max_speed)
    return replace(state, e=y[0], n=y[1], psi=wrap_compass(y[2]), u=u_new,
                   r=y[4], rudder=rudder_cmd, throttle=throttle_cmd)
