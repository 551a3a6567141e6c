import math

import numpy as np
import pytest

from gpnav.errors import InvalidInputError
from gpnav.usv import (ActuatorModel, ControllerGains, MissionLog, PidGains,
                       PidState, VesselState, from_compass, heading_error,
                       pid_step, refine_heading, run_mission, step_kinematics,
                       to_compass, wrap_compass)


class TestKinematics:
    def test_at_rest_stays_at_rest(self):
        state = VesselState(e=3.0, n=4.0)
        out = step_kinematics(state, 0.0, 0.0, None, dt=0.1)
        assert out.e == pytest.approx(3.0)
        assert out.n == pytest.approx(4.0)

    def test_heading_east_moves_east(self):
        state = VesselState(psi=math.pi / 2, u=1.0)
        out = step_kinematics(state, 0.0, 0.1, None, dt=1e-3)
        assert out.e - state.e == pytest.approx(1e-3, rel=1e-4)
        assert abs(out.n - state.n) < 1e-6

    def test_constant_rate_turn_matches_analytic_arc(self):
        act = ActuatorModel()
        u0, r0 = 2.0, 0.05
        # commands holding surge and yaw rate at their current values
        throttle = u0 / act.max_speed
        rudder = r0 / act.yaw_gain
        state = VesselState(psi=math.pi / 3, u=u0, r=r0)
        psi0 = state.psi
        dt = 0.01
        for _ in range(10_000):  # 100 s
            state = step_kinematics(state, rudder, throttle, None, dt, act)
        t = 100.0
        psi_t = psi0 + r0 * t
        e_expect = (u0 / r0) * (math.cos(psi0) - math.cos(psi_t))
        n_expect = (u0 / r0) * (math.sin(psi_t) - math.sin(psi0))
        assert state.e == pytest.approx(e_expect, abs=1e-6)
        assert state.n == pytest.approx(n_expect, abs=1e-6)

    def test_pure_advection_is_exact(self):
        current = np.array([0.31, -0.17])
        state = VesselState(e=1.0, n=2.0)
        for _ in range(1000):
            state = step_kinematics(state, 0.0, 0.0, current, dt=0.01)
        assert state.e == pytest.approx(1.0 + 0.31 * 10.0, abs=1e-12)
        assert state.n == pytest.approx(2.0 - 0.17 * 10.0, abs=1e-12)

    def test_speed_limit_enforced(self):
        with pytest.raises(InvalidInputError):
            VesselState(u=11.0)

    def test_dt_must_be_positive(self):
        with pytest.raises(InvalidInputError):
            step_kinematics(VesselState(), 0.0, 0.0, None, dt=0.0)


class TestGuidance:
    def test_bearing_northeast(self):
        assert refine_heading(0.0, 0.0, 1.0, 1.0) == pytest.approx(math.pi / 4)

    def test_bearing_due_north_is_two_pi(self):
        assert refine_heading(0.0, 0.0, 0.0, 5.0) == pytest.approx(2 * math.pi)

    def test_bearing_matches_vector_angle_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            p = rng.normal(scale=50, size=2)
            w = rng.normal(scale=50, size=2)
            if np.allclose(p, w):
                continue
            got = refine_heading(p[0], p[1], w[0], w[1])
            # independent construction: angle of the offset vector measured
            # from the north axis, wrapped into (0, 2 pi]
            d = w - p
            raw = math.atan2(d[0], d[1])
            want = raw % (2 * math.pi)
            want = 2 * math.pi if want == 0.0 else want
            assert got == pytest.approx(want, abs=1e-12)

    def test_coincident_points_keep_previous(self):
        assert refine_heading(3.0, 3.0, 3.0, 3.0, previous=1.2) == pytest.approx(1.2)

    def test_compass_conversion_branches(self):
        assert to_compass(math.pi / 2) == pytest.approx(math.pi / 2)
        assert to_compass(-math.pi / 2) == pytest.approx(3 * math.pi / 2)
        assert to_compass(math.pi) == pytest.approx(math.pi)

    def test_compass_round_trip(self):
        rng = np.random.default_rng(8)
        angles = rng.uniform(-math.pi + 1e-12, math.pi, 100_000)
        for a in angles[:200]:
            assert from_compass(to_compass(a)) == pytest.approx(a, abs=1e-12)
        # vector spot-check over the rest
        for a in angles[::97]:
            assert from_compass(to_compass(float(a))) == pytest.approx(a, abs=1e-12)

    def test_compass_is_bijection_onto_range(self):
        for a in np.linspace(-math.pi + 1e-9, math.pi, 1000):
            c = to_compass(float(a))
            assert 0.0 < c <= 2 * math.pi


class TestPid:
    def test_zero_error_zero_command(self):
        assert pid_step(PidState(), 0.0, PidGains(2.0, 0.5, 0.1), 0.01) == 0.0

    def test_proportional_only(self):
        out = pid_step(PidState(), 0.7, PidGains(2.0), 0.01)
        assert out == pytest.approx(1.4)

    def test_heading_wrap_gives_short_turn(self):
        desired = math.radians(350.0)
        actual = math.radians(360.0) - 1e-12
        err = heading_error(desired, actual)
        assert err == pytest.approx(math.radians(-10.0), abs=1e-9)
        command = pid_step(PidState(), err, PidGains(2.0), 0.01)
        assert command < 0

    def test_integral_clamp(self):
        state = PidState()
        for _ in range(1000):
            pid_step(state, 10.0, PidGains(0.0, 1.0), 0.1, integral_clamp=2.0)
        assert abs(state.integral) <= 2.0

    def test_rate_limit(self):
        out = pid_step(PidState(), 5.0, PidGains(10.0), 0.01,
                       rate_limit=1.0, prev_output=0.0)
        assert out == pytest.approx(0.01)


class TestMission:
    def test_two_waypoint_straight_line(self):
        path = np.array([[0.0, 10.0, 10.0, 8.0, 6.0],
                         [1.0, 410.0, 310.0, 8.0, 6.0]])
        log = run_mission(path[:, 0], path[:, 1:])
        assert log.completed
        s = log.summary()
        assert np.hypot(log.e[-1] - 410.0, log.n[-1] - 310.0) <= 7.0
        assert s["max_cross_track_m"] < 2.0

    def test_repeated_waypoint_completes_immediately(self):
        path = np.array([[0.0, 5.0, 5.0, 0.0, 0.0],
                         [1.0, 5.0, 5.0, 0.0, 0.0]])
        log = run_mission(path[:, 0], path[:, 1:])
        assert log.completed
        assert log.t[-1] == 0.0

    def test_cross_track_nonnegative_and_zero_on_path(self):
        path = np.array([[0.0, 0.0, 0.0, 5.0, 5.0],
                         [1.0, 100.0, 100.0, 5.0, 5.0]])
        log = run_mission(path[:, 0], path[:, 1:])
        assert np.all(log.cross_track >= 0.0)
        assert log.cross_track[0] == pytest.approx(0.0, abs=1e-9)

    def test_no_heading_command_jump_across_north(self):
        # desired track crosses due north repeatedly; psi_d must stay
        # continuous after wrapping (no 2 pi leaps between steps)
        ys = np.linspace(0.0, 300.0, 31)
        xs = 5.0 * np.sin(ys / 40.0)
        waypoints = np.column_stack([xs, ys])
        vel = np.gradient(waypoints, axis=0)
        vel = vel / np.linalg.norm(vel, axis=1, keepdims=True) * 6.0
        times = np.linspace(0.0, 50.0, 31)
        log = run_mission(times, np.column_stack([waypoints, vel]))
        diffs = [abs(heading_error(b, a))
                 for a, b in zip(log.psi_d[:-1], log.psi_d[1:])]
        assert max(diffs) < 0.5

    def test_time_budget_flags_incomplete(self):
        path = np.array([[0.0, 0.0, 0.0, 5.0, 5.0],
                         [1.0, 500.0, 0.0, 5.0, 5.0]])
        log = run_mission(path[:, 0], path[:, 1:], time_budget=5.0)
        assert not log.completed

    def test_mission_requires_two_waypoints(self):
        with pytest.raises(InvalidInputError):
            run_mission(np.array([0.0]), np.array([[0.0, 0.0, 1.0, 0.0]]))

    def test_csv_round_trip(self):
        path = np.array([[0.0, 0.0, 0.0, 5.0, 5.0],
                         [1.0, 60.0, 60.0, 5.0, 5.0]])
        log = run_mission(path[:, 0], path[:, 1:])
        text = log.to_csv()
        assert text.splitlines()[0] == "t,E,N,psi,psi_d,V,V_d,cross_track"
        back = MissionLog.from_csv(text)
        assert np.allclose(back.e, log.e)
        assert np.allclose(back.cross_track, log.cross_track)
        assert back.mean_abs_heading_change() == pytest.approx(
            log.mean_abs_heading_change())

    def test_uniform_current_drift_compensated(self):
        from gpnav.fields import EnvironmentField
        current = np.full((200, 200, 2), 0.0)
        current[:, :, 0] = 1.0  # steady easterly set
        env = EnvironmentField(current=current,
                               energy_rate=np.zeros((200, 200)))
        path = np.array([[0.0, 20.0, 20.0, 0.0, 6.0],
                         [1.0, 20.0, 180.0, 0.0, 6.0]])
        log = run_mission(path[:, 0], path[:, 1:], env=env)
        assert log.completed
        assert log.summary()["mean_cross_track_m"] < 3.0


def test_wrap_compass_range():
    assert wrap_compass(0.0) == pytest.approx(2 * math.pi)
    assert wrap_compass(2 * math.pi) == pytest.approx(2 * math.pi)
    assert wrap_compass(-math.pi / 2) == pytest.approx(1.5 * math.pi)
