"""FastAPI service wrapping the planning core.

Stateless by design: maps and artifacts travel in request/response bodies,
so the service needs no shared filesystem with its clients.
"""
from __future__ import annotations

import base64
import tempfile
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..baselines import timed_states
from ..bench import run_benchmark, run_planner
from ..errors import InvalidInputError, PlanningFailedError
from ..optimize.planner import PlanResult, collision_check, plan, polyline_length
from ..plots import emit_mission_artifacts, emit_plan_artifacts, emit_report_artifacts
from ..scenarios import generate_scenarios
from ..usv.control import ControllerGains, PidGains
from ..usv.mission import MissionLog, run_mission
from .schemas import (BenchRequest, BenchResponse, GenerateRequest,
                      GenerateResponse, MissionRequest, MissionResponse,
                      PlanRequest, PlanResponse, PlotRequest, PlotResponse)

app = FastAPI(title="gpnav planning service", version=__version__)


@app.exception_handler(InvalidInputError)
async def _invalid_input(_: Request, exc: InvalidInputError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/plan", response_model=PlanResponse)
def plan_endpoint(req: PlanRequest) -> PlanResponse:
    scenario = req.scenario.to_scenario()
    if req.seed is not None:
        scenario.seed = req.seed
    deadline = time.monotonic() + req.timeout_s
    try:
        if req.planner in ("gp-mc", "gp-fixed"):
            params = scenario.gp if req.planner == "gp-mc" else \
                replace(scenario.gp, interpolation="fixed")
            result = plan(scenario.start, scenario.goal, scenario.workspace(),
                          params, body=scenario.body(), n_replan=scenario.replan,
                          seed=scenario.seed, deadline=deadline)
        else:
            t0 = time.perf_counter()
            pts, _ = run_planner(scenario, req.planner, scenario.seed, deadline)
            times, states = timed_states(pts, scenario.gp.total_time)
            ok, clearance = collision_check(pts, scenario.workspace().sdf,
                                            scenario.body())
            result = PlanResult(times=times[:1], support=states[:1],
                                path_times=times, path=states,
                                length_m=polyline_length(pts), collision_free=ok,
                                min_clearance_m=clearance,
                                duration_s=time.perf_counter() - t0)
    except PlanningFailedError as exc:
        return PlanResponse(success=False, planner=req.planner, reason=exc.reason)
    doc = result.to_dict()
    return PlanResponse(success=True, planner=req.planner, **doc)


@app.post("/bench", response_model=BenchResponse)
def bench_endpoint(req: BenchRequest) -> BenchResponse:
    scenarios = [s.to_scenario() for s in req.scenarios]
    report = run_benchmark(scenarios, jobs=req.jobs, timeout_s=req.timeout_s)
    return BenchResponse(report=report)


@app.post("/mission", response_model=MissionResponse)
def mission_endpoint(req: MissionRequest) -> MissionResponse:
    rows = np.asarray(req.path, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != 5:
        raise InvalidInputError("path rows must be (t, x, y, vx, vy)")
    env = None
    if req.scenario is not None:
        env = req.scenario.to_scenario().workspace().env
    gains = ControllerGains(
        heading=PidGains(req.heading_gains.kp, req.heading_gains.ki,
                         req.heading_gains.kd),
        speed=PidGains(req.speed_gains.kp, req.speed_gains.ki, req.speed_gains.kd))
    log = run_mission(rows[:, 0], rows[:, 1:], env=env, gains=gains, dt=req.dt,
                      accept_radius=req.accept_radius,
                      time_budget=req.time_budget)
    return MissionResponse(summary=log.summary(), csv=log.to_csv())


@app.post("/scenarios/generate", response_model=GenerateResponse)
def generate_endpoint(req: GenerateRequest) -> GenerateResponse:
    currents = {"none": False, "currents": True, "both": "both"}[req.currents]
    with tempfile.TemporaryDirectory() as tmp:
        written = generate_scenarios(req.names, size=req.size, currents=currents,
                                     out_dir=tmp)
        files = {p.name: base64.b64encode(p.read_bytes()).decode("ascii")
                 for p in written}
    return GenerateResponse(files=files)


@app.post("/plot", response_model=PlotResponse)
def plot_endpoint(req: PlotRequest) -> PlotResponse:
    scenario_objs = {}
    for model in req.scenarios:
        scen = model.to_scenario()
        scenario_objs[scen.name] = scen
    first = next(iter(scenario_objs.values()), None)
    with tempfile.TemporaryDirectory() as tmp:
        if req.kind == "plan":
            if req.plan is None:
                raise InvalidInputError("plot kind 'plan' needs a plan payload")
            result = PlanResult.from_dict(req.plan)
            emit_plan_artifacts(result, tmp, stem=req.stem,
                                grid=first.grid if first else None,
                                env=first.workspace().env if first else None,
                                start=first.start if first else None,
                                goal=first.goal if first else None)
        elif req.kind == "mission":
            if req.mission_csv is None:
                raise InvalidInputError("plot kind 'mission' needs mission_csv")
            log = MissionLog.from_csv(req.mission_csv)
            desired = np.array(req.plan["path"])[:, 1:3] if req.plan else None
            emit_mission_artifacts(log, tmp, stem=req.stem,
                                   grid=first.grid if first else None,
                                   env=first.workspace().env if first else None,
                                   desired=desired)
        else:
            if req.report is None:
                raise InvalidInputError("plot kind 'report' needs a report payload")
            emit_report_artifacts(req.report, tmp, scenarios=scenario_objs)
        files = {p.name: p.read_text() for p in sorted(Path(tmp).iterdir())}
    return PlotResponse(files=files)
