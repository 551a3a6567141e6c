import json

import numpy as np
import pytest

from gpnav.errors import InvalidInputError
from gpnav.factors import (BodyModel, FactorKind, build_factor_graph,
                           environment_error, graph_objective, interpolated_error,
                           obstacle_error)
from gpnav.fields import OccupancyGrid, VortexSpec, Workspace, compute_sdf
from gpnav.gp import GpModel
from gpnav.gp.interpolation import interpolation_coeffs
from gpnav.optimize import straight_line_states
from gpnav.params import PlannerParams


def _graph(grid, params, start=(5.0, 5.0), goal=(55.0, 55.0), seed=0,
           vortices=()):
    ws = Workspace.build(grid, list(vortices))
    model = GpModel.uniform(dim=2, qc_scale=params.qc_scale,
                            total_time=params.total_time,
                            segments=params.segments)
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    v0 = (goal - start) / params.total_time
    graph = build_factor_graph(model, ws, BodyModel.single_circle(1.0), params,
                               np.concatenate([start, v0]),
                               np.concatenate([goal, v0]),
                               np.random.default_rng(seed))
    return graph, model, ws


def kind_counts(graph):
    counts = {}
    for f in graph.factors:
        counts[f.kind] = counts.get(f.kind, 0) + 1
    return counts


class TestBuilder:
    def test_obstacle_free_segments_have_no_interpolated_factors(self):
        grid = OccupancyGrid(np.zeros((64, 64), dtype=np.uint8))
        graph, _, _ = _graph(grid, PlannerParams(segments=5, mc_samples=64))
        assert graph.interp_counts == [0, 0, 0, 0, 0]

    def test_all_obstacle_counts_from_scaling(self):
        grid = OccupancyGrid(np.ones((64, 64), dtype=np.uint8))
        params = PlannerParams(segments=5, interp_scale=8.0, mc_samples=32)
        graph, _, _ = _graph(grid, params)
        assert graph.interp_counts == [8, 8, 8, 8, 8]
        counts = kind_counts(graph)
        assert counts[FactorKind.PRIOR] == 2
        assert counts[FactorKind.GP_PRIOR] == 5
        assert counts[FactorKind.OBSTACLE] == 5
        assert counts[FactorKind.ENVIRONMENT] == 5
        assert counts[FactorKind.INTERP_OBSTACLE] == 40
        assert counts[FactorKind.INTERP_ENVIRONMENT] == 40

    def test_benchmark_schedule_counts(self):
        cells = np.zeros((64, 64), dtype=np.uint8)
        cells[20:40, 20:40] = 1
        graph, _, _ = _graph(OccupancyGrid(cells), PlannerParams(segments=5))
        counts = kind_counts(graph)
        assert counts[FactorKind.PRIOR] == 2
        assert counts[FactorKind.GP_PRIOR] == 5

    def test_interpolation_cap_recorded(self):
        grid = OccupancyGrid(np.ones((32, 32), dtype=np.uint8))
        params = PlannerParams(segments=3, interp_scale=100.0, interp_cap=6,
                               mc_samples=16)
        graph, _, _ = _graph(grid, params, goal=(30.0, 30.0))
        assert graph.interp_counts == [6, 6, 6]
        assert graph.capped_segments == [0, 1, 2]

    def test_same_seed_reproduces_structure_and_objective(self):
        rng = np.random.default_rng(0)
        cells = (rng.random((48, 48)) < 0.3).astype(np.uint8)
        cells[:8, :8] = 0
        cells[-8:, -8:] = 0
        grid = OccupancyGrid(cells)
        params = PlannerParams(segments=4, mc_samples=50)
        g1, model, _ = _graph(grid, params, goal=(40.0, 40.0), seed=77)
        g2, _, _ = _graph(grid, params, goal=(40.0, 40.0), seed=77)
        assert g1.structure_json() == g2.structure_json()
        states = straight_line_states(np.array([5.0, 5.0]), np.array([40.0, 40.0]),
                                      model)
        assert g1.objective(states) == g2.objective(states)

    def test_structure_dump_is_valid_json(self):
        grid = OccupancyGrid(np.zeros((32, 32), dtype=np.uint8))
        graph, _, _ = _graph(grid, PlannerParams(segments=3), goal=(30.0, 30.0))
        doc = json.loads(graph.structure_json())
        assert doc["support_count"] == 4
        assert doc["factors"][0]["kind"] == "prior"


class TestObstacleError:
    def setup_method(self):
        cells = np.zeros((64, 64), dtype=np.uint8)
        cells[28:36, 28:36] = 1
        self.sdf = compute_sdf(OccupancyGrid(cells))
        self.body = BodyModel.single_circle(1.0)

    def test_inactive_far_from_obstacles(self):
        res, jac = obstacle_error(np.array([5.0, 5.0, 0.0, 0.0]), self.sdf,
                                  self.body, safety_margin=20.0, sigma=1.0)
        d, _, _ = self.sdf.sample(np.array([[5.0, 5.0]]))
        assert d[0] >= 21.0
        assert np.all(res == 0.0)
        assert np.all(jac == 0.0)

    def test_hinge_arithmetic(self):
        # distance 0 at an obstacle boundary, radius 1, margin 20 -> 21
        cells = np.zeros((9, 9), dtype=np.uint8)
        cells[:, :5] = 1
        sdf = compute_sdf(OccupancyGrid(cells))
        pos = np.array([4.5, 4.0])  # halfway between last occupied and first free
        d, _, _ = sdf.sample(pos[None, :])
        assert d[0] == pytest.approx(0.0, abs=1e-12)
        res, _ = obstacle_error(np.array([4.5, 4.0, 0.0, 0.0]), sdf, self.body,
                                safety_margin=20.0, sigma=1.0)
        assert res[0] == pytest.approx(21.0)

    def test_jacobian_matches_finite_differences(self):
        rng = np.random.default_rng(8)
        h = 1e-5
        checked = 0
        while checked < 100:
            theta = np.concatenate([rng.uniform(5, 58, 2), rng.normal(size=2)])
            res, jac = obstacle_error(theta, self.sdf, self.body, 20.0, 0.05)
            d, _, _ = self.sdf.sample(self.body.centers(theta[:2]))
            # skip probes near the hinge kink or cell boundaries
            if np.any(np.abs(d - 21.0) < 0.05) or \
                    np.any(np.abs(theta[:2] - np.round(theta[:2])) < 10 * h):
                continue
            checked += 1
            for k in range(2):
                step = np.zeros(4)
                step[k] = h
                hi, _ = obstacle_error(theta + step, self.sdf, self.body, 20.0, 0.05)
                lo, _ = obstacle_error(theta - step, self.sdf, self.body, 20.0, 0.05)
                fd = (hi - lo) / (2 * h)
                assert np.allclose(jac[:, k], fd,
                                   atol=1e-4 * max(1.0, np.abs(fd).max()))


class TestEnvironmentError:
    def test_zero_field_zero_residual(self):
        ws = Workspace.build(OccupancyGrid(np.zeros((32, 32), dtype=np.uint8)))
        res, jac = environment_error(np.array([10.0, 10.0, 0.0, 0.0]), ws.env,
                                     BodyModel.single_circle(1.0), sigma=0.005)
        assert np.all(res == 0.0)

    def test_maximum_cell_normalization(self):
        ws = Workspace.build(OccupancyGrid(np.zeros((32, 32), dtype=np.uint8)),
                             [VortexSpec((16.0, 16.0), 600.0, 5.0)])
        peak = np.unravel_index(ws.env.energy_rate.argmax(),
                                ws.env.energy_rate.shape)
        pos = np.array([float(peak[1]), float(peak[0])])
        res, _ = environment_error(np.concatenate([pos, np.zeros(2)]), ws.env,
                                   BodyModel.single_circle(1.0), sigma=0.005)
        assert res[0] == pytest.approx(1.0 / 0.005)

    def test_jacobian_matches_finite_differences(self):
        ws = Workspace.build(OccupancyGrid(np.zeros((64, 64), dtype=np.uint8)),
                             [VortexSpec((32.0, 32.0), 900.0, 9.0)])
        body = BodyModel.single_circle(1.0)
        rng = np.random.default_rng(10)
        h = 1e-5
        checked = 0
        while checked < 100:
            theta = np.concatenate([rng.uniform(3, 60, 2), rng.normal(size=2)])
            if np.any(np.abs(theta[:2] - np.round(theta[:2])) < 10 * h):
                continue
            checked += 1
            _, jac = environment_error(theta, ws.env, body, 0.005)
            for k in range(2):
                step = np.zeros(4)
                step[k] = h
                hi, _ = environment_error(theta + step, ws.env, body, 0.005)
                lo, _ = environment_error(theta - step, ws.env, body, 0.005)
                fd = (hi - lo) / (2 * h)
                assert np.allclose(jac[:, k], fd,
                                   atol=1e-4 * max(1.0, np.abs(fd).max()))


class TestInterpolatedFactors:
    def test_jacobians_and_sparsity(self):
        cells = np.zeros((64, 64), dtype=np.uint8)
        cells[28:36, 28:36] = 1
        sdf = compute_sdf(OccupancyGrid(cells))
        body = BodyModel.single_circle(1.0)
        rng = np.random.default_rng(11)
        lam, psi = interpolation_coeffs(0.0, 1.0, 0.35, np.eye(2))
        h = 1e-5
        checked = 0
        while checked < 60:
            theta_i = np.concatenate([rng.uniform(5, 58, 2), rng.normal(size=2)])
            theta_j = np.concatenate([rng.uniform(5, 58, 2), rng.normal(size=2)])
            pos = (lam @ theta_i + psi @ theta_j)[:2]
            d, _, _ = sdf.sample(pos[None, :])
            if np.abs(d[0] - 21.0) < 0.1 or \
                    np.any(np.abs(pos - np.round(pos)) < 10 * h):
                continue
            checked += 1
            res, j_i, j_j = interpolated_error(obstacle_error, theta_i, theta_j,
                                               lam, psi, sdf, body, 20.0, 0.05)
            for k in range(4):
                step = np.zeros(4)
                step[k] = h
                hi, _, _ = interpolated_error(obstacle_error, theta_i + step,
                                              theta_j, lam, psi, sdf, body,
                                              20.0, 0.05)
                lo, _, _ = interpolated_error(obstacle_error, theta_i - step,
                                              theta_j, lam, psi, sdf, body,
                                              20.0, 0.05)
                fd = (hi - lo) / (2 * h)
                assert np.allclose(j_i[:, k], fd,
                                   atol=1e-4 * max(1.0, np.abs(fd).max()))

    def test_residual_depends_only_on_bracketing_states(self):
        cells = np.zeros((64, 64), dtype=np.uint8)
        cells[20:44, 28:36] = 1
        grid = OccupancyGrid(cells)
        params = PlannerParams(segments=4, mc_samples=64, interp_scale=10.0)
        graph, model, _ = _graph(grid, params, start=(5.0, 32.0),
                                 goal=(58.0, 32.0))
        states = straight_line_states(np.array([5.0, 32.0]), np.array([58.0, 32.0]),
                                      model)
        base = graph.residuals(states)
        interp_rows = {}
        row = 0
        for f in graph.factors:
            size = model.state_dim if f.kind in (FactorKind.PRIOR,
                                                 FactorKind.GP_PRIOR) else 1
            if f.kind in (FactorKind.INTERP_OBSTACLE, FactorKind.INTERP_ENVIRONMENT):
                interp_rows[row] = f.states
            row += size
        assert interp_rows, "scenario must generate interpolated factors"
        rng = np.random.default_rng(1)
        for row, involved in interp_rows.items():
            for k in range(model.support_count):
                perturbed = states.copy()
                perturbed[k] += rng.normal(scale=0.5, size=4)
                delta = graph.residuals(perturbed)[row] - base[row]
                if k not in involved and delta != 0.0:
                    raise AssertionError(
                        f"row {row} changed when untouched state {k} moved")


class TestObjective:
    def test_straight_line_zero_cost_in_empty_map(self):
        grid = OccupancyGrid(np.zeros((64, 64), dtype=np.uint8))
        params = PlannerParams(segments=5)
        graph, model, _ = _graph(grid, params)
        states = straight_line_states(np.array([5.0, 5.0]), np.array([55.0, 55.0]),
                                      model)
        assert graph_objective(graph, states) == pytest.approx(0.0, abs=1e-18)

    def test_doubling_sigma_quarters_obstacle_cost(self):
        cells = np.zeros((64, 64), dtype=np.uint8)
        cells[24:40, 24:40] = 1
        grid = OccupancyGrid(cells)
        base = PlannerParams(segments=4, sigma_obs=0.05, mc_samples=64)
        doubled = PlannerParams(segments=4, sigma_obs=0.10, mc_samples=64)
        g1, model, _ = _graph(grid, base, start=(5.0, 32.0), goal=(58.0, 32.0))
        g2, _, _ = _graph(grid, doubled, start=(5.0, 32.0), goal=(58.0, 32.0))
        states = straight_line_states(np.array([5.0, 32.0]), np.array([58.0, 32.0]),
                                      model)
        # prior/gp/env residuals vanish on this configuration, so the whole
        # objective is obstacle cost
        c1 = graph_objective(g1, states)
        c2 = graph_objective(g2, states)
        assert c1 > 0
        assert c2 == pytest.approx(c1 / 4.0, rel=1e-12)

    def test_objective_equals_per_factor_sum(self):
        cells = np.zeros((64, 64), dtype=np.uint8)
        cells[24:40, 24:40] = 1
        grid = OccupancyGrid(cells)
        params = PlannerParams(segments=4, mc_samples=64)
        vort = [VortexSpec((40.0, 20.0), 500.0, 8.0)]
        graph, model, ws = _graph(grid, params, start=(5.0, 32.0),
                                  goal=(58.0, 32.0), vortices=vort)
        rng = np.random.default_rng(3)
        states = straight_line_states(np.array([5.0, 32.0]), np.array([58.0, 32.0]),
                                      model) + rng.normal(scale=2.0,
                                                          size=(model.support_count, 4))
        total = 0.0
        body = graph.body
        from gpnav.gp import gp_prior_error
        for f in graph.factors:
            if f.kind is FactorKind.PRIOR:
                w = np.concatenate([np.full(2, 1 / params.position_prior_sigma),
                                    np.full(2, 1 / params.velocity_prior_sigma)])
                e = w * (states[f.states[0]] - f.mean)
            elif f.kind is FactorKind.GP_PRIOR:
                i, j = f.states
                e, _, _ = gp_prior_error(states[i], states[j],
                                         model.timestamps[i], model.timestamps[j],
                                         model.qc)
            elif f.kind is FactorKind.OBSTACLE:
                e, _ = obstacle_error(states[f.states[0]], ws.sdf, body,
                                      params.safety_margin, params.sigma_obs)
            elif f.kind is FactorKind.ENVIRONMENT:
                e, _ = environment_error(states[f.states[0]], ws.env, body,
                                         params.sigma_env)
            elif f.kind is FactorKind.INTERP_OBSTACLE:
                i, j = f.states
                e, _, _ = interpolated_error(obstacle_error, states[i], states[j],
                                             f.lam, f.psi, ws.sdf, body,
                                             params.safety_margin, params.sigma_obs)
            else:
                i, j = f.states
                e, _, _ = interpolated_error(environment_error, states[i],
                                             states[j], f.lam, f.psi, ws.env,
                                             body, params.sigma_env)
            total += 0.5 * float(np.dot(e, e))
        assert graph_objective(graph, states) == pytest.approx(total, rel=1e-12)

    def test_arity_mismatch_rejected(self):
        grid = OccupancyGrid(np.zeros((32, 32), dtype=np.uint8))
        graph, _, _ = _graph(grid, PlannerParams(segments=3), goal=(30.0, 30.0))
        with pytest.raises(InvalidInputError):
            graph.objective(np.zeros(12))
