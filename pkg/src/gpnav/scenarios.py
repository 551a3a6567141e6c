"""Built-in benchmark maps and scenario configuration files.

Five map families at three resolutions: empty, single-obstacle,
multi-obstacle, narrow-passage and a synthetic coastline. Feature positions
scale with the map size; the planner parameter schedule (total time and
region count per resolution) ships alongside each map in a JSON config.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .fields.grid import OccupancyGrid

PROBLEMS = ("problem1", "problem2", "problem3", "problem4", "problem5",
            "coastal_replan")
SIZES = (500, 1000, 2000)

# per-resolution planner schedule: (total_time, segments)
_SCHEDULE = {500: (2.0, 5), 1000: (4.0, 10), 2000: (8.0, 20)}

_BASE = 500  # feature coordinates below are expressed on the 500 x 500 map


def _disc(cells: np.ndarray, cx: float, cy: float, radius: float):
    h, w = cells.shape
    cols, rows = np.meshgrid(np.arange(w), np.arange(h))
    cells[(cols - cx) ** 2 + (rows - cy) ** 2 <= radius ** 2] = 1


def _rect(cells: np.ndarray, x0: float, x1: float, y0: float, y1: float):
    h, w = cells.shape
    cells[max(int(y0), 0):min(int(y1) + 1, h), max(int(x0), 0):min(int(x1) + 1, w)] = 1


def _capsule(cells: np.ndarray, a, b, radius: float):
    h, w = cells.shape
    cols, rows = np.meshgrid(np.arange(w), np.arange(h))
    pts = np.stack([cols, rows], axis=-1).astype(float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    t = np.clip(((pts - a) @ d) / max(float(d @ d), 1e-9), 0.0, 1.0)
    proj = a + t[..., None] * d
    cells[np.linalg.norm(pts - proj, axis=-1) <= radius] = 1


def build_map(problem: str, size: int = 500) -> OccupancyGrid:
    if problem not in PROBLEMS:
        raise InvalidInputError(
            f"unknown problem '{problem}'; choose one of {', '.join(PROBLEMS)}")
    if size not in SIZES:
        raise InvalidInputError(f"unknown size {size}; choose one of {SIZES}")
    f = size / _BASE
    cells = np.zeros((size, size), dtype=np.uint8)

    if problem == "problem2":
        _disc(cells, 250 * f, 225 * f, 80 * f)
    elif problem == "problem3":
        # three discs astride the straight route plus two flankers; every
        # corridor between neighbours stays comfortably wider than twice the
        # 20 px safety distance
        _disc(cells, 160 * f, 160 * f, 45 * f)
        _disc(cells, 300 * f, 260 * f, 45 * f)
        _disc(cells, 420 * f, 300 * f, 25 * f)
        _disc(cells, 140 * f, 320 * f, 40 * f)
        _disc(cells, 330 * f, 120 * f, 40 * f)
    elif problem == "problem4":
        # one free corridor, 56 px wide on the base map (under 4x the 20 px
        # safety distance), through a 40 px thick wall
        _rect(cells, 230 * f, 270 * f, 0, (222 * f) - 1)
        _rect(cells, 230 * f, 270 * f, 278 * f, size - 1)
    elif problem == "problem5":
        # coastline bulging from the west plus an offshore island: two routes
        rows = np.arange(size)
        coast = (60 + 190 * np.exp(-(((rows / f) - 250) / 80.0) ** 2)) * f
        cols = np.arange(size)
        cells[cols[None, :] < coast[:, None]] = 1
        _disc(cells, 350 * f, 250 * f, 45 * f)
    elif problem == "coastal_replan":
        # straight shoreline plus two slanted reef islets across the route;
        # the route choice around each islet is deliberately ambiguous, which
        # is what gives the replanning loop distinct path families to compare
        cells[:, :int(40 * f)] = 1
        _capsule(cells, (110 * f, 150 * f), (195 * f, 255 * f), 26 * f)
        _capsule(cells, (125 * f, 285 * f), (210 * f, 395 * f), 26 * f)
    return OccupancyGrid(cells=cells, cell_size=1.0)


def _endpoints(problem: str, size: int):
    f = size / _BASE
    if problem in ("problem5", "coastal_replan"):
        return [160 * f, 60 * f], [160 * f, 440 * f]
    return [50 * f, 75 * f], [450 * f, 375 * f]


def _vortices(problem: str, size: int) -> list[dict]:
    f = size / _BASE
    table = {
        "problem1": [((210, 279), 1200.0, 60.0)],
        "problem2": [((150, 280), 1000.0, 50.0)],
        "problem3": [((200, 120), 900.0, 45.0), ((320, 340), -900.0, 45.0)],
        # counter-rotating pair drives a near-peak-energy jet through the
        # corridor, closing it for planners that treat such cells as no-go
        "problem4": [((250, 180), 1500.0, 55.0), ((250, 320), -1500.0, 55.0)],
        "problem5": [((340, 140), 1000.0, 50.0)],
        "coastal_replan": [((330, 120), 1000.0, 50.0)],
    }
    return [{"center": [c[0] * f, c[1] * f], "circulation": g * f,
             "core_radius": r * f} for (c, g, r) in table[problem]]


def scenario_config(problem: str, size: int = 500, currents: bool = False) -> dict:
    """Scenario document carrying the map reference and planner parameters."""
    if problem not in PROBLEMS:
        raise InvalidInputError(
            f"unknown problem '{problem}'; choose one of {', '.join(PROBLEMS)}")
    total_time, segments = _SCHEDULE[size]
    start, goal = _endpoints(problem, size)
    name = f"{problem}_{size}" + ("_currents" if currents else "")
    replanning = problem == "coastal_replan"
    gp = {
        "safety_margin": 20.0,
        "sigma_obs": 0.05,
        "sigma_env": 0.005,
        "total_time": total_time,
        "segments": segments,
        "qc_scale": 1.0,
        "interp_scale": 10.0,
        "mc_samples": 1000,
        "interp_cap": 50,
        "output_resolution": 64,
    }
    if replanning:
        # diversity profile: a loose prior and a coarse obstacle estimate
        # make successive replanning iterations explore distinct routes
        gp.update(qc_scale=5.0, interp_scale=12.0, mc_samples=32)
    return {
        "name": name,
        "map": f"{problem}_{size}.pgm",
        "start": start,
        "goal": goal,
        "planners": (["gp-mc"] if replanning else
                     ["gp-mc", "gp-fixed", "astar", "rrt-star", "fmm"]),
        "gp": gp,
        "grid_step": 10.0,
        "vortices": _vortices(problem, size) if currents else [],
        "max_current": 2.0,
        "body_radius": 3.0,
        "replan": 5 if replanning else 1,
        "seed": 1000 + 10 * PROBLEMS.index(problem),
        "repetitions": 5,
    }


def generate_scenarios(names, size: int = 500, currents=False,
                       out_dir=".") -> list[Path]:
    """Write PGM maps and JSON configs; returns the created paths.

    ``names`` may be problem names or "all"; ``currents`` may be a bool or
    "both".
    """
    if isinstance(names, str):
        names = [names]
    problems: list[str] = []
    for name in names:
        if name == "all":
            problems.extend(PROBLEMS)
        elif name in PROBLEMS:
            problems.append(name)
        else:
            raise InvalidInputError(
                f"unknown scenario '{name}'; options: all, {', '.join(PROBLEMS)}")
    modes = [False, True] if currents == "both" else [bool(currents)]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    written: list[Path] = []
    for problem in dict.fromkeys(problems):
        grid = build_map(problem, size)
        written.append(grid.to_pgm(out_dir / f"{problem}_{size}.pgm"))
        for mode in modes:
            cfg = scenario_config(problem, size, mode)
            path = out_dir / f"{cfg['name']}.json"
            path.write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")
            written.append(path)
    return written
