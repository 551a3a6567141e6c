"""First-arrival planner over an energy-dependent slowness field.

Isotropic stand-in for anisotropic current-following planners: the front
moves at speed 1 / (1 + beta * energy_rate), obstacles and near-peak energy
cells are impassable, and the path follows the arrival-time gradient.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError, PlanningFailedError
from ..fields.bilinear import bilinear_sample


@dataclass(frozen=True)
class FmmParams:
    beta: float = 5.0
    block_energy: float = 0.9    # cells with energy_rate >= this are impassable
    safety_margin: float = 0.0   # clearance below which cells are impassable
    timeout_s: float = 30.0
    step_fraction: float = 0.4   # descent step as a fraction of the cell size


@dataclass
class FmmResult:
    path: np.ndarray
    mean_energy: float
    arrival_time: float


def _solve_arrival(blocked: np.ndarray, slowness: np.ndarray, h: float,
                   src: tuple[int, int], stop_cell: tuple[int, int],
                   deadline: float) -> np.ndarray:
    """First-order upwind fast marching from ``src``; stops once the region
    around ``stop_cell`` is solidly accepted."""
    height, width = blocked.shape
    t_map = np.full((height, width), np.inf)
    accepted = np.zeros((height, width), dtype=bool)
    heap: list[tuple[float, int, int]] = []
    t_map[src] = 0.0
    heapq.heappush(heap, (0.0, src[0], src[1]))
    stop_t = None
    margin = 4.0 * slowness.max() * h

    while heap:
        t, r, c = heapq.heappop(heap)
        if accepted[r, c]:
            continue
        if stop_t is not None and t > stop_t + margin:
            break
        accepted[r, c] = True
        if (r, c) == stop_cell:
            stop_t = t
        if time.monotonic() > deadline:
            raise PlanningFailedError("timeout", diagnostics={"accepted": int(accepted.sum())})
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nr, nc = r + dr, c + dc
            if not (0 <= nr < height and 0 <= nc < width):
                continue
            if accepted[nr, nc] or blocked[nr, nc]:
                continue
            a = min(t_map[nr, nc - 1] if nc > 0 else np.inf,
                    t_map[nr, nc + 1] if nc < width - 1 else np.inf)
            b = min(t_map[nr - 1, nc] if nr > 0 else np.inf,
                    t_map[nr + 1, nc] if nr < height - 1 else np.inf)
            sh = slowness[nr, nc] * h
            if math.isinf(a) and math.isinf(b):
                continue
            if abs(a - b) < sh and not (math.isinf(a) or math.isinf(b)):
                cand = 0.5 * (a + b + math.sqrt(2.0 * sh * sh - (a - b) ** 2))
            else:
                cand = min(a, b) + sh
            if cand < t_map[nr, nc]:
                t_map[nr, nc] = cand
                heapq.heappush(heap, (cand, nr, nc))
    return t_map


def fmm_plan(grid, env, start, goal, params: FmmParams | None = None,
             sdf=None, deadline: float | None = None) -> FmmResult:
    """Plan by marching the arrival-time front from the goal and descending.

    Raises ``planning-failed`` when the start is unreachable, i.e. every
    route is closed by obstacles, the safety margin around them, or the
    near-peak energy band.
    """
    params = params or FmmParams()
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    if deadline is None:
        deadline = time.monotonic() + params.timeout_s

    energy = np.asarray(env.energy_rate, dtype=float)
    blocked = (grid.cells != 0) | (energy >= params.block_energy)
    if params.safety_margin > 0.0:
        if sdf is None:
            from ..fields.sdf import compute_sdf
            sdf = compute_sdf(grid)
        blocked |= sdf.values <= params.safety_margin
    slowness = 1.0 + params.beta * energy
    h = grid.cell_size

    def cell_of(p):
        row, col = grid.cell_index(p[None, :])
        return int(row[0]), int(col[0])

    src = cell_of(goal)
    dst = cell_of(start)
    for name, cell in (("start", dst), ("goal", src)):
        if blocked[cell]:
            raise InvalidInputError(f"{name} cell is impassable")

    t_map = _solve_arrival(blocked, slowness, h, src, dst, deadline)
    if not np.isfinite(t_map[dst]):
        raise PlanningFailedError("goal unreachable from start",
                                  diagnostics={"reachable": int(np.isfinite(t_map).sum())})

    # strictly descending walk on the arrival time, start towards goal;
    # unaccepted cells carry a large finite value so interpolation never
    # produces NaNs, and every move must lower the (interpolated) time
    finite = t_map[np.isfinite(t_map)]
    t_desc = np.where(np.isfinite(t_map), t_map, finite.max() * 2.0 + 1.0)
    step = params.step_fraction * h
    pos = start.copy()
    path = [pos.copy()]
    t_here, _, _ = bilinear_sample(t_desc, h, grid.origin, pos[None, :])
    t_here = float(t_here[0])
    max_steps = int(20 * (grid.width + grid.height) / params.step_fraction)
    for _ in range(max_steps):
        if np.linalg.norm(pos - goal) <= 1.5 * h:
            break
        _, g, _ = bilinear_sample(t_desc, h, grid.origin, pos[None, :])
        norm = float(np.linalg.norm(g[0]))
        cand = pos - g[0] / norm * step if norm > 1e-12 else None
        if cand is not None:
            t_cand, _, _ = bilinear_sample(t_desc, h, grid.origin, cand[None, :])
            t_cand = float(t_cand[0])
        if cand is None or t_cand >= t_here - 1e-12:
            # flat or uphill: steepest discrete neighbour, strictly downhill
            here = cell_of(pos)
            best, best_t = None, t_map[here]
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    nr, nc = here[0] + dr, here[1] + dc
                    if 0 <= nr < grid.height and 0 <= nc < grid.width \
                            and t_map[nr, nc] < best_t:
                        best, best_t = (nr, nc), t_map[nr, nc]
            if best is None:
                raise PlanningFailedError("descent stalled before the goal")
            cand = grid.origin + np.array([best[1], best[0]], dtype=float) * h
            t_cand = float(best_t)
        pos = cand
        t_here = t_cand
        path.append(pos.copy())
    else:
        raise PlanningFailedError("descent exceeded the step budget")
    if np.linalg.norm(path[-1] - goal) > 0:
        path.append(goal.copy())
    path = np.array(path)

    e_vals, _, _ = bilinear_sample(energy, h, grid.origin, path)
    return FmmResult(path=path, mean_energy=float(e_vals.mean()),
                     arrival_time=float(t_map[dst]))
