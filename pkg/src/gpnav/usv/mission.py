"""Closed-loop waypoint-following missions with track-error analytics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from .control import ControllerGains, PidState, pid_step
from .guidance import heading_error, refine_heading, wrap_pi
from .vessel import ActuatorModel, VesselState, step_kinematics


@dataclass
class MissionLog:
    """Fixed-step time series of desired vs measured guidance quantities."""

    t: np.ndarray
    e: np.ndarray
    n: np.ndarray
    psi: np.ndarray
    psi_d: np.ndarray
    speed: np.ndarray
    speed_d: np.ndarray
    cross_track: np.ndarray
    waypoint_hits: list[tuple[int, float]] = field(default_factory=list)
    completed: bool = False

    def to_csv(self) -> str:
        lines = ["t,E,N,psi,psi_d,V,V_d,cross_track"]
        for row in zip(self.t, self.e, self.n, self.psi, self.psi_d,
                       self.speed, self.speed_d, self.cross_track):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    def mean_abs_heading_change(self) -> float:
        """Mean per-step |change in desired heading|, wrap-aware."""
        if self.psi_d.size < 2:
            return 0.0
        diffs = [abs(wrap_pi(b - a)) for a, b in zip(self.psi_d[:-1], self.psi_d[1:])]
        return float(np.mean(diffs))

    @classmethod
    def from_csv(cls, text: str) -> "MissionLog":
        """Rebuild the series from a CSV dump (hit log is not round-tripped)."""
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        data = np.array(rows, dtype=float) if rows else np.empty((0, 8))
        return cls(t=data[:, 0], e=data[:, 1], n=data[:, 2], psi=data[:, 3],
                   psi_d=data[:, 4], speed=data[:, 5], speed_d=data[:, 6],
                   cross_track=data[:, 7])

    def summary(self) -> dict:
        return {
            "completed": self.completed,
            "duration_s": float(self.t[-1]) if self.t.size else 0.0,
            "mean_cross_track_m": float(self.cross_track.mean()) if self.cross_track.size else 0.0,
            "max_cross_track_m": float(self.cross_track.max()) if self.cross_track.size else 0.0,
            "mean_abs_heading_change_rad": self.mean_abs_heading_change(),
            "waypoints_hit": len(self.waypoint_hits),
        }


class _PathTracker:
    """Nearest-segment queries over a polyline with monotone progress.

    The nearest segment is searched in a forward window from the last known
    position so self-approaching paths (sampling-based planners produce
    them) cannot snap the tracker backwards or ahead across a loop.
    """

    def __init__(self, points: np.ndarray, window_m: float = 60.0):
        self.points = points
        self.a = points[:-1]
        self.d = points[1:] - points[:-1]
        seg_len = np.linalg.norm(self.d, axis=1)
        self.l2 = np.maximum(np.einsum("ij,ij->i", self.d, self.d), 1e-18)
        self.arc = np.concatenate([[0.0], np.cumsum(seg_len)])
        self.total = float(self.arc[-1])
        self.window = window_m
        self.index = 0

    def update(self, p: np.ndarray):
        """Advance to the nearest path point at or after the current one.

        Returns ``(cross_track, arclength, segment_index)``.
        """
        lo = self.index
        hi = len(self.a)
        if self.total > 0:
            hi = int(np.searchsorted(self.arc, self.arc[lo] + self.window)) + 1
            hi = min(max(hi, lo + 2), len(self.a))
        a = self.a[lo:hi]
        d = self.d[lo:hi]
        t = np.clip(np.einsum("ij,ij->i", p - a, d) / self.l2[lo:hi], 0.0, 1.0)
        proj = a + t[:, None] * d
        dist = np.linalg.norm(proj - p, axis=1)
        k = int(np.argmin(dist))
        self.index = lo + k
        s = self.arc[self.index] + t[k] * np.sqrt(self.l2[self.index])
        return float(dist[k]), float(s), self.index

    def point_at(self, s: float) -> np.ndarray:
        s = min(max(s, 0.0), self.total)
        j = min(int(np.searchsorted(self.arc, s, side="right")) - 1, len(self.a) - 1)
        j = max(j, 0)
        seg = np.sqrt(self.l2[j])
        frac = (s - self.arc[j]) / seg if seg > 0 else 0.0
        return self.a[j] + min(frac, 1.0) * self.d[j]


def _curvature_speed_limit(waypoints: np.ndarray, act: ActuatorModel,
                           window_m: float = 20.0) -> np.ndarray:
    """Per-waypoint speed cap so the achievable yaw rate can hold the turn.

    Jagged paths (sampling-based planners) are untrackable at full speed;
    v <= yaw_capacity / curvature keeps the turn radius feasible.
    """
    if len(waypoints) < 3:
        return np.full(len(waypoints), act.max_speed)
    d = np.diff(waypoints, axis=0)
    seg = np.maximum(np.linalg.norm(d, axis=1), 1e-9)
    ang = np.arctan2(d[:, 1], d[:, 0])
    turn = np.abs(np.arctan2(np.sin(np.diff(ang)), np.cos(np.diff(ang))))
    kappa = np.zeros(len(waypoints))
    kappa[1:-1] = turn / (0.5 * (seg[:-1] + seg[1:]))
    # smooth over a short arclength window so the vessel slows before a bend
    half = max(1, int(window_m / max(seg.mean(), 1e-9) / 2))
    kernel = np.ones(2 * half + 1)
    smoothed = np.convolve(kappa, kernel, mode="same") / np.convolve(
        np.ones_like(kappa), kernel, mode="same")
    kappa = np.maximum(kappa, smoothed)
    yaw_capacity = 0.8 * act.yaw_gain * act.max_rudder
    with np.errstate(divide="ignore"):
        limit = np.where(kappa > 1e-9, yaw_capacity / kappa, np.inf)
    return np.clip(limit, 1.0, act.max_speed)


def run_mission(path_times: np.ndarray, path_states: np.ndarray, env=None,
                gains: ControllerGains | None = None, dt: float = 0.01,
                accept_radius: float = 7.0, time_budget: float | None = None,
                actuators: ActuatorModel | None = None) -> MissionLog:
    """Drive the simulated vessel along a planned path.

    ``path_states`` rows are (x, y, vx, vy); x maps to east and y to north.
    The active waypoint advances once the vessel is inside ``accept_radius``
    (countering inertia); the desired speed comes from the path timing,
    capped at the hull maximum. The mission ends at the final waypoint or
    when the time budget runs out (logged with ``completed=False``).
    """
    path_states = np.atleast_2d(np.asarray(path_states, dtype=float))
    if path_states.shape[0] < 2:
        raise InvalidInputError("mission path needs at least two waypoints")
    gains = gains or ControllerGains()
    act = actuators or ActuatorModel()

    waypoints = path_states[:, :2]
    speeds = np.minimum(np.linalg.norm(path_states[:, 2:4], axis=1), act.max_speed)
    speeds = np.minimum(speeds, _curvature_speed_limit(waypoints, act))
    speeds = np.maximum(speeds, 0.5)  # keep missions moving on degenerate timing
    track = _PathTracker(waypoints)
    length = track.total
    if time_budget is None:
        time_budget = max(60.0, 5.0 * length / max(speeds.max(), 0.5))
    max_steps = int(math.ceil(time_budget / dt)) + 1

    psi0 = refine_heading(waypoints[0, 0], waypoints[0, 1],
                          waypoints[-1, 0], waypoints[-1, 1])
    state = VesselState(e=waypoints[0, 0], n=waypoints[0, 1], psi=psi0)
    heading_pid = PidState()
    speed_pid = PidState()
    current_fn = env.sample_current if env is not None else None

    cols = [np.empty(max_steps + 1) for _ in range(8)]
    log_t, log_e, log_n, log_psi, log_psid, log_v, log_vd, log_ct = cols
    hits: list[tuple[int, float]] = []
    active = 0
    completed = False
    psi_d = state.psi
    steps = 0

    for k in range(max_steps + 1):
        t = k * dt
        pos = state.position
        cross, along, seg = track.update(pos)
        # the active waypoint advances once reached (7 m radius) or passed
        while active < len(waypoints) - 1 and (
                np.linalg.norm(waypoints[active] - pos) <= accept_radius
                or active <= seg):
            hits.append((active, t))
            active += 1
        # steer at a point further along the path; the lookahead grows with
        # speed so the desired heading never slews faster than the hull can
        # turn, and never shrinks below the waypoint acceptance radius
        lookahead = max(accept_radius, 2.5 * state.speed)
        carrot = track.point_at(along + lookahead)
        psi_d = refine_heading(pos[0], pos[1], carrot[0], carrot[1],
                               previous=psi_d)
        v_d = float(speeds[active])

        log_t[k] = t
        log_e[k] = state.e
        log_n[k] = state.n
        log_psi[k] = state.psi
        log_psid[k] = psi_d
        log_v[k] = state.speed
        log_vd[k] = v_d
        log_ct[k] = cross
        steps = k + 1

        if active == len(waypoints) - 1 and \
                np.linalg.norm(waypoints[-1] - pos) <= accept_radius:
            hits.append((active, t))
            completed = True  # standby at the final waypoint
            break
        if t >= time_budget:
            break

        err_psi = heading_error(psi_d, state.psi)
        rudder = pid_step(heading_pid, err_psi, gains.heading, dt,
                          integral_clamp=gains.integral_clamp,
                          output_limits=(-act.max_rudder, act.max_rudder),
                          rate_limit=gains.rudder_rate, prev_output=state.rudder)
        throttle = pid_step(speed_pid, v_d - state.u, gains.speed, dt,
                            integral_clamp=gains.integral_clamp,
                            output_limits=(0.0, 1.0),
                            rate_limit=gains.throttle_rate,
                            prev_output=state.throttle)
        state = step_kinematics(state, rudder, throttle, current_fn, dt, act)

    return MissionLog(t=log_t[:steps].copy(), e=log_e[:steps].copy(),
                      n=log_n[:steps].copy(), psi=log_psi[:steps].copy(),
                      psi_d=log_psid[:steps].copy(), speed=log_v[:steps].copy(),
                      speed_d=log_vd[:steps].copy(),
                      cross_track=log_ct[:steps].copy(),
                      waypoint_hits=hits, completed=completed)
