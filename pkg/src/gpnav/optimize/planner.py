"""Replanning trajectory planner: rebuild, solve, keep shorter feasible paths."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError, NumericalConditioningError, PlanningFailedError
from ..factors.body import BodyModel
from ..factors.graph import build_factor_graph
from ..fields.workspace import Workspace
from ..gp.interpolation import coeff_blocks, interpolation_coeffs
from ..gp.model import GpModel
from ..params import PlannerParams
from .lm import LmResult, LmSettings, lm_solve


@dataclass
class ReplanRecord:
    iteration: int
    length_m: float
    objective: float
    interp_counts: list[int]
    collision_free: bool
    accepted: bool

    def to_dict(self) -> dict:
        return {"iteration": self.iteration, "length_m": self.length_m,
                "objective": self.objective, "interp_counts": self.interp_counts,
                "collision_free": self.collision_free, "accepted": self.accepted}


@dataclass
class PlanResult:
    """Optimized support states, densified path and per-iteration diagnostics."""

    times: np.ndarray            # (n_support,)
    support: np.ndarray          # (n_support, 2D)
    path_times: np.ndarray       # (n_dense,)
    path: np.ndarray             # (n_dense, 2D)
    length_m: float
    collision_free: bool
    min_clearance_m: float
    duration_s: float
    replans: list[ReplanRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "length_m": self.length_m,
            "collision_free": self.collision_free,
            "min_clearance_m": self.min_clearance_m,
            "duration_s": self.duration_s,
            "support": np.column_stack([self.times, self.support]).tolist(),
            "path": np.column_stack([self.path_times, self.path]).tolist(),
            "replans": [r.to_dict() for r in self.replans],
        }

    def path_csv(self) -> str:
        lines = ["t,x,y,vx,vy"]
        for t, row in zip(self.path_times, self.path):
            lines.append(",".join(repr(float(v))
                                  for v in (t, row[0], row[1], row[2], row[3])))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "PlanResult":
        support = np.atleast_2d(np.asarray(doc["support"], dtype=float))
        path = np.atleast_2d(np.asarray(doc["path"], dtype=float))
        replans = [ReplanRecord(**r) for r in doc.get("replans", [])]
        return cls(times=support[:, 0], support=support[:, 1:],
                   path_times=path[:, 0], path=path[:, 1:],
                   length_m=doc["length_m"], collision_free=doc["collision_free"],
                   min_clearance_m=doc.get("min_clearance_m", 0.0),
                   duration_s=doc.get("duration_s", 0.0), replans=replans)


def polyline_length(positions: np.ndarray) -> float:
    positions = np.asarray(positions, dtype=float)
    if len(positions) < 2:
        return 0.0
    return float(np.linalg.norm(np.diff(positions, axis=0), axis=1).sum())


def densify(states: np.ndarray, timestamps: np.ndarray, qc: np.ndarray,
            resolution: int):
    """Interpolate ``resolution - 1`` interior states into every segment.

    Returns ``(times, dense_states)`` including the support states, in time
    order. ``resolution == 1`` returns the support states unchanged.
    """
    if resolution < 1:
        raise InvalidInputError("resolution must be >= 1")
    states = np.asarray(states, dtype=float)
    timestamps = np.asarray(timestamps, dtype=float)
    n_seg = len(timestamps) - 1
    deltas = np.diff(timestamps)
    uniform = bool(np.allclose(deltas, deltas[0]))

    if uniform and resolution > 1:
        # one coefficient pair per interior offset, shared by all segments
        dt = float(deltas[0])
        dim = states.shape[1] // 2
        offsets_in = dt * np.arange(1, resolution) / resolution
        lam2, psi2 = coeff_blocks(offsets_in, dt)
        blocks = states.reshape(len(states), 2, dim)
        interior = (np.einsum("kab,sbd->skad", lam2, blocks[:-1])
                    + np.einsum("kab,sbd->skad", psi2, blocks[1:]))
        interior = interior.reshape(n_seg, resolution - 1, 2 * dim)
        out_x = np.empty((n_seg * resolution + 1, states.shape[1]))
        out_t = np.empty(n_seg * resolution + 1)
        out_x[::resolution] = states
        out_t[::resolution] = timestamps
        offsets = dt * np.arange(1, resolution) / resolution
        for i in range(n_seg):
            sl = slice(i * resolution + 1, (i + 1) * resolution)
            out_x[sl] = interior[i]
            out_t[sl] = timestamps[i] + offsets
        return out_t, out_x

    out_t = [timestamps[0]]
    out_x = [states[0]]
    for i in range(n_seg):
        t_i, t_j = timestamps[i], timestamps[i + 1]
        for k in range(1, resolution):
            tau = t_i + (t_j - t_i) * k / resolution
            lam, psi = interpolation_coeffs(t_i, t_j, tau, qc)
            out_t.append(tau)
            out_x.append(lam @ states[i] + psi @ states[i + 1])
        out_t.append(t_j)
        out_x.append(states[i + 1])
    return np.array(out_t), np.array(out_x)


def collision_check(positions: np.ndarray, sdf, body: BodyModel):
    """True iff every body circle keeps positive clearance along the path.

    Returns ``(collision_free, min_clearance)`` where the clearance is the
    minimum over the path of (signed distance - circle radius).
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    if positions.size == 0:
        raise InvalidInputError("empty path")
    centers = positions[:, None, :] + body.offsets[None, :, :]
    d, _, _ = sdf.sample(centers.reshape(-1, 2))
    clearance = d.reshape(len(positions), -1) - body.radii[None, :]
    min_clear = float(clearance.min())
    return bool(min_clear > 0.0), min_clear


def straight_line_states(start: np.ndarray, goal: np.ndarray,
                         model: GpModel) -> np.ndarray:
    """Constant-velocity straight-line initialization of the support states."""
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    alphas = (model.timestamps - model.timestamps[0]) / model.total_time
    v0 = (goal - start) / model.total_time
    states = np.empty((model.support_count, model.state_dim))
    states[:, :model.dim] = start + alphas[:, None] * (goal - start)
    states[:, model.dim:] = v0
    return states


def plan(start, goal, workspace: Workspace, params: PlannerParams | None = None,
         body: BodyModel | None = None, n_replan: int = 1, seed: int = 0,
         lm_settings: LmSettings | None = None,
         deadline: float | None = None) -> PlanResult:
    """Plan from start to goal with the replanning accept/reject loop.

    Each iteration rebuilds the stochastic factor graph, solves it from the
    straight-line initialization and keeps the new path only when it is both
    strictly shorter than the incumbent and collision-free. If no iteration
    produces a collision-free path, the best-objective path is returned with
    ``collision_free=False``.
    """
    t_start = time.perf_counter()
    params = params or PlannerParams()
    body = body or BodyModel.single_circle()
    if n_replan < 1:
        raise InvalidInputError("n_replan must be >= 1")
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    for name, p in (("start", start), ("goal", goal)):
        if not workspace.grid.contains(p[None, :])[0]:
            raise InvalidInputError(f"{name} lies outside the map")
        if workspace.grid.occupied_at(p[None, :])[0]:
            raise InvalidInputError(f"{name} lies inside an obstacle")

    model = GpModel.uniform(dim=2, qc_scale=params.qc_scale,
                            total_time=params.total_time, segments=params.segments)
    v0 = (goal - start) / params.total_time
    start_state = np.concatenate([start, v0])
    goal_state = np.concatenate([goal, v0])
    init = straight_line_states(start, goal, model)

    children = np.random.SeedSequence(seed).spawn(n_replan)
    incumbent: dict | None = None
    fallback: dict | None = None
    records: list[ReplanRecord] = []
    failures: list[str] = []

    for i in range(n_replan):
        if deadline is not None and time.monotonic() > deadline:
            if incumbent is None and fallback is None:
                raise PlanningFailedError("timeout before any solve completed")
            break
        graph = build_factor_graph(model, workspace, body, params, start_state,
                                   goal_state, np.random.default_rng(children[i]))
        try:
            solved: LmResult = lm_solve(graph, init, lm_settings, deadline=deadline)
        except NumericalConditioningError as exc:
            failures.append(f"iteration {i + 1}: {exc}")
            continue
        times, dense = densify(solved.states, model.timestamps, model.qc,
                               params.output_resolution)
        length = polyline_length(dense[:, :model.dim])
        feasible, _ = collision_check(dense[:, :model.dim], workspace.sdf, body)
        accepted = feasible and (incumbent is None or length < incumbent["length"])
        records.append(ReplanRecord(iteration=i + 1, length_m=length,
                                    objective=solved.cost,
                                    interp_counts=list(graph.interp_counts),
                                    collision_free=feasible, accepted=accepted))
        candidate = {"times": times, "dense": dense, "support": solved.states,
                     "length": length, "objective": solved.cost}
        if accepted:
            incumbent = candidate
        if fallback is None or solved.cost < fallback["objective"]:
            fallback = candidate

    if incumbent is None and fallback is None:
        raise PlanningFailedError(
            "numeric failure in every replanning iteration",
            diagnostics=failures)
    chosen = incumbent if incumbent is not None else fallback
    feasible, clearance = collision_check(chosen["dense"][:, :model.dim],
                                          workspace.sdf, body)
    return PlanResult(times=model.timestamps.copy(), support=chosen["support"],
                      path_times=chosen["times"], path=chosen["dense"],
                      length_m=chosen["length"], collision_free=feasible,
                      min_clearance_m=clearance,
                      duration_s=time.perf_counter() - t_start, replans=records)
