"""Benchmark harness: run planners over scenarios, aggregate metrics."""
from __future__ import annotations

import copy
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .baselines import (FmmParams, GridSearchParams, RrtStarParams, astar_plan,
                        densify_polyline, fmm_plan, rrt_star_plan)
from .errors import GpnavError, InvalidInputError, PlanningFailedError
from .factors.body import BodyModel
from .fields.bilinear import bilinear_sample
from .fields.grid import OccupancyGrid
from .fields.environment import VortexSpec
from .fields.workspace import Workspace
from .optimize.planner import collision_check, plan, polyline_length
from .params import PlannerParams

PLANNER_NAMES = ("gp-mc", "gp-fixed", "astar", "rrt-star", "fmm")

REPORT_FORMAT = "gpnav-bench-1"


@dataclass
class Scenario:
    """One benchmark instance: map, endpoints, planner set and parameters."""

    name: str
    grid: OccupancyGrid
    start: np.ndarray
    goal: np.ndarray
    planners: list[str]
    gp: PlannerParams = field(default_factory=PlannerParams)
    grid_step: float = 10.0
    vortices: list[VortexSpec] = field(default_factory=list)
    max_current: float = 2.0
    body_radius: float = 3.0
    replan: int = 1
    seed: int = 0
    repetitions: int = 5
    map_name: str = ""

    def __post_init__(self):
        self.start = np.asarray(self.start, dtype=float)
        self.goal = np.asarray(self.goal, dtype=float)
        if self.repetitions < 1:
            raise InvalidInputError("repetitions must be >= 1")
        unknown = [p for p in self.planners if p not in PLANNER_NAMES]
        if unknown:
            raise InvalidInputError(
                f"unknown planners {unknown}; options: {', '.join(PLANNER_NAMES)}")
        self._workspace: Workspace | None = None

    @classmethod
    def from_dict(cls, doc: dict, grid: OccupancyGrid) -> "Scenario":
        gp = PlannerParams(**doc.get("gp", {}))
        vortices = [VortexSpec(center=tuple(v["center"]),
                               circulation=v["circulation"],
                               core_radius=v["core_radius"])
                    for v in doc.get("vortices", [])]
        return cls(name=doc["name"], grid=grid, start=doc["start"], goal=doc["goal"],
                   planners=list(doc["planners"]), gp=gp,
                   grid_step=doc.get("grid_step", 10.0), vortices=vortices,
                   max_current=doc.get("max_current", 2.0),
                   body_radius=doc.get("body_radius", 3.0),
                   replan=doc.get("replan", 1), seed=doc.get("seed", 0),
                   repetitions=doc.get("repetitions", 5),
                   map_name=doc.get("map", ""))

    @classmethod
    def from_file(cls, path) -> "Scenario":
        """Load a config; the referenced map must exist next to it."""
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read scenario {path}: {exc}") from exc
        map_path = path.parent / doc["map"]
        if not map_path.exists():
            raise InvalidInputError(f"scenario {path.name} references missing map "
                                    f"{map_path}")
        return cls.from_dict(doc, OccupancyGrid.from_pgm(map_path))

    def workspace(self) -> Workspace:
        if self._workspace is None:
            self._workspace = Workspace.build(self.grid, self.vortices,
                                              self.max_current)
        return self._workspace

    def body(self) -> BodyModel:
        return BodyModel.single_circle(self.body_radius)


def mean_turn_angle(points: np.ndarray) -> float:
    """Mean absolute heading change between consecutive path segments."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    d = np.diff(points, axis=0)
    keep = np.linalg.norm(d, axis=1) > 1e-9
    d = d[keep]
    if len(d) < 2:
        return 0.0
    ang = np.arctan2(d[:, 1], d[:, 0])
    turn = np.abs(np.arctan2(np.sin(np.diff(ang)), np.cos(np.diff(ang))))
    return float(turn.mean())


def _downsample(points: np.ndarray, limit: int = 256) -> list[list[float]]:
    points = np.atleast_2d(points)
    if len(points) > limit:
        idx = np.unique(np.linspace(0, len(points) - 1, limit).astype(int))
        points = points[idx]
    return np.round(points, 6).tolist()


def run_planner(scenario: Scenario, planner: str, seed_parts, deadline: float):
    """Execute one planner once; returns (positions (n,2), collision_free)."""
    ws = scenario.workspace()
    if planner == "gp-mc" or planner == "gp-fixed":
        params = scenario.gp if planner == "gp-mc" else \
            replace(scenario.gp, interpolation="fixed")
        result = plan(scenario.start, scenario.goal, ws, params,
                      body=scenario.body(), n_replan=scenario.replan,
                      seed=seed_parts, deadline=deadline)
        return result.path[:, :2], result.collision_free
    if planner == "astar":
        res = astar_plan(scenario.grid, ws.sdf, scenario.start, scenario.goal,
                         GridSearchParams(step=scenario.grid_step,
                                          safety_margin=scenario.gp.safety_margin),
                         deadline=deadline)
        pts = densify_polyline(res.path, scenario.grid.cell_size)
    elif planner == "rrt-star":
        pts = rrt_star_plan(scenario.grid, ws.sdf, scenario.start, scenario.goal,
                            RrtStarParams(step=scenario.grid_step,
                                          safety_margin=scenario.gp.safety_margin),
                            rng=np.random.default_rng(seed_parts),
                            deadline=deadline)
        pts = densify_polyline(pts, scenario.grid.cell_size)
    elif planner == "fmm":
        res = fmm_plan(scenario.grid, ws.env, scenario.start, scenario.goal,
                       FmmParams(safety_margin=scenario.gp.safety_margin),
                       sdf=ws.sdf, deadline=deadline)
        pts = res.path
    else:
        raise InvalidInputError(f"unknown planner '{planner}'")
    ok, _ = collision_check(pts, ws.sdf, scenario.body())
    return pts, ok


def _run_one(scenario: Scenario, planner: str, rep: int, timeout_s: float) -> dict:
    seed_parts = [scenario.seed, PLANNER_NAMES.index(planner), rep]
    record = {"scenario": scenario.name, "planner": planner, "rep": rep,
              "seed": seed_parts, "success": False, "time_ms": 0.0,
              "length_m": None, "energy_pct": None, "smoothness_rad": None,
              "collision_free": None, "reason": None, "path": None}
    scenario.workspace()  # field precomputation excluded from the timing
    t0 = time.perf_counter()
    try:
        pts, collision_free = run_planner(scenario, planner, seed_parts,
                                          deadline=time.monotonic() + timeout_s)
    except PlanningFailedError as exc:
        record["time_ms"] = (time.perf_counter() - t0) * 1e3
        record["reason"] = exc.reason
        return record
    record["time_ms"] = (time.perf_counter() - t0) * 1e3
    env = scenario.workspace().env
    e_vals, _, _ = bilinear_sample(env.energy_rate, env.cell_size, env.origin, pts)
    record.update(success=True,
                  length_m=round(polyline_length(pts), 9),
                  energy_pct=round(float(e_vals.mean()) * 100.0, 9),
                  smoothness_rad=round(mean_turn_angle(pts), 9),
                  collision_free=bool(collision_free),
                  path=_downsample(pts))
    return record


def _aggregate(values: list[float]) -> dict | None:
    if not values:
        return None
    return {"mean": round(float(np.mean(values)), 9),
            "min": round(float(min(values)), 9),
            "max": round(float(max(values)), 9)}


def run_benchmark(scenarios: list[Scenario], jobs: int = 1,
                  timeout_s: float = 30.0) -> dict:
    """Run every (planner, scenario) pair for its configured repetitions.

    Per-repetition seeds derive from the scenario seed, so reports are
    reproducible; wall time is measured around the planner call only and
    field precomputation is reported separately per scenario.
    """
    for s in scenarios:
        if not isinstance(s, Scenario):
            raise InvalidInputError("run_benchmark expects Scenario objects")
    tasks = [(si, planner, rep)
             for si, s in enumerate(scenarios)
             for planner in s.planners
             for rep in range(s.repetitions)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_run_task,
                                [(scenarios[si], p, r, timeout_s)
                                 for si, p, r in tasks]))
    else:
        raw = [_run_one(scenarios[si], p, r, timeout_s) for si, p, r in tasks]

    rows = []
    for si, s in enumerate(scenarios):
        for planner in s.planners:
            runs = [r for r in raw
                    if r["scenario"] == s.name and r["planner"] == planner]
            ok = [r for r in runs if r["success"]]
            rows.append({
                "scenario": s.name, "planner": planner,
                "repetitions": len(runs), "successes": len(ok),
                "failures": len(runs) - len(ok),
                "time_ms": _aggregate([r["time_ms"] for r in ok]),
                "length_m": _aggregate([r["length_m"] for r in ok]),
                "energy_pct": _aggregate([r["energy_pct"] for r in ok]),
                "smoothness_rad": _aggregate([r["smoothness_rad"] for r in ok]),
                "collision_free_all": bool(ok) and all(r["collision_free"]
                                                       for r in ok),
            })
    return {
        "format": REPORT_FORMAT,
        "timeout_s": timeout_s,
        "scenarios": [{
            "name": s.name, "map": s.map_name,
            "start": list(map(float, s.start)), "goal": list(map(float, s.goal)),
            "replan": s.replan, "seed": s.seed, "repetitions": s.repetitions,
            "field_precompute_ms": s.workspace().precompute_s * 1e3,
        } for s in scenarios],
        "rows": rows,
        "raw": raw,
    }


def _run_task(args):
    return _run_one(*args)


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def report_csv(report: dict) -> str:
    """Aggregate table, one row per (scenario, planner)."""
    header = ("scenario,planner,repetitions,successes,time_ms_mean,time_ms_min,"
              "time_ms_max,length_m_mean,length_m_min,length_m_max,"
              "energy_pct_mean,smoothness_rad_mean,collision_free_all")
    lines = [header]
    for row in report["rows"]:
        def agg(key, what="mean"):
            block = row[key]
            return "" if block is None else repr(block[what])
        lines.append(",".join([
            row["scenario"], row["planner"], str(row["repetitions"]),
            str(row["successes"]), agg("time_ms"), agg("time_ms", "min"),
            agg("time_ms", "max"), agg("length_m"), agg("length_m", "min"),
            agg("length_m", "max"), agg("energy_pct"), agg("smoothness_rad"),
            str(row["collision_free_all"]),
        ]))
    return "\n".join(lines) + "\n"


def mask_timing(report: dict) -> dict:
    """Copy of a report with wall-clock fields zeroed (identity checks)."""
    masked = copy.deepcopy(report)
    for s in masked.get("scenarios", []):
        s["field_precompute_ms"] = 0.0
    for row in masked.get("rows", []):
        if row.get("time_ms") is not None:
            row["time_ms"] = {"mean": 0.0, "min": 0.0, "max": 0.0}
    for r in masked.get("raw", []):
        r["time_ms"] = 0.0
    return masked
