"""Pydantic request/response models of the planning service."""
from __future__ import annotations

import base64
from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..bench import Scenario
from ..fields.grid import OccupancyGrid


class VortexModel(BaseModel):
    center: tuple[float, float]
    circulation: float
    core_radius: float = Field(gt=0)


class GpConfigModel(BaseModel):
    safety_margin: float = 20.0
    sigma_obs: float = Field(default=0.05, gt=0)
    sigma_env: float = Field(default=0.005, gt=0)
    total_time: float = Field(default=2.0, gt=0)
    segments: int = Field(default=5, ge=1)
    qc_scale: float = Field(default=1.0, gt=0)
    interp_scale: float = Field(default=10.0, ge=0)
    mc_samples: int = Field(default=1000, ge=1)
    interp_cap: int = Field(default=50, ge=0)
    interpolation: Literal["mc", "fixed"] = "mc"
    fixed_interp: int = Field(default=10, ge=0)
    output_resolution: int = Field(default=64, ge=1)


class ScenarioModel(BaseModel):
    """Self-contained scenario: the map travels base64-encoded in ``map_pgm``."""

    name: str = "scenario"
    map_pgm: str
    start: tuple[float, float]
    goal: tuple[float, float]
    planners: list[str] = ["gp-mc"]
    gp: GpConfigModel = Field(default_factory=GpConfigModel)
    grid_step: float = Field(default=10.0, gt=0)
    vortices: list[VortexModel] = []
    max_current: float = Field(default=2.0, gt=0)
    body_radius: float = Field(default=3.0, gt=0)
    replan: int = Field(default=1, ge=1)
    seed: int = 0
    repetitions: int = Field(default=5, ge=1)

    def to_scenario(self) -> Scenario:
        grid = OccupancyGrid.from_pgm_bytes(base64.b64decode(self.map_pgm))
        doc = self.model_dump()
        doc["map"] = self.name + ".pgm"
        return Scenario.from_dict(doc, grid)


class ReplanModel(BaseModel):
    iteration: int
    length_m: float
    objective: float
    interp_counts: list[int]
    collision_free: bool
    accepted: bool


class PlanRequest(BaseModel):
    scenario: ScenarioModel
    planner: str = "gp-mc"
    seed: Optional[int] = None
    timeout_s: float = Field(default=30.0, gt=0)


class PlanResponse(BaseModel):
    success: bool
    planner: str
    reason: Optional[str] = None
    length_m: Optional[float] = None
    collision_free: Optional[bool] = None
    min_clearance_m: Optional[float] = None
    duration_s: Optional[float] = None
    support: list[list[float]] = []
    path: list[list[float]] = []
    replans: list[ReplanModel] = []


class BenchRequest(BaseModel):
    scenarios: list[ScenarioModel]
    jobs: int = Field(default=1, ge=1)
    timeout_s: float = Field(default=30.0, gt=0)


class BenchResponse(BaseModel):
    report: dict


class PidGainsModel(BaseModel):
    kp: float = Field(ge=0)
    ki: float = Field(default=0.0, ge=0)
    kd: float = Field(default=0.0, ge=0)


class MissionRequest(BaseModel):
    path: list[list[float]]  # rows (t, x, y, vx, vy)
    scenario: Optional[ScenarioModel] = None
    heading_gains: PidGainsModel = Field(default_factory=lambda: PidGainsModel(kp=2.0, kd=0.5))
    speed_gains: PidGainsModel = Field(default_factory=lambda: PidGainsModel(kp=1.0, ki=0.2))
    dt: float = Field(default=0.01, gt=0)
    accept_radius: float = Field(default=7.0, gt=0)
    time_budget: Optional[float] = None


class MissionResponse(BaseModel):
    summary: dict
    csv: str


class GenerateRequest(BaseModel):
    names: list[str]
    size: int = 500
    currents: Literal["none", "currents", "both"] = "none"


class GenerateResponse(BaseModel):
    files: dict[str, str]  # file name -> base64 content


class PlotRequest(BaseModel):
    kind: Literal["plan", "mission", "report"]
    plan: Optional[dict] = None
    mission_csv: Optional[str] = None
    report: Optional[dict] = None
    scenarios: list[ScenarioModel] = []
    stem: str = "plot"


class PlotResponse(BaseModel):
    files: dict[str, str]  # file name -> text content (SVG or CSV)
