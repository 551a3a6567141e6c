"""Coarse-lattice A* over the safety-inflated clearance field."""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError, PlanningFailedError
from .common import points_clear, segment_clear

_MOVES = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]


@dataclass(frozen=True)
class GridSearchParams:
    step: float = 10.0           # lattice spacing, map units
    safety_margin: float = 20.0  # nodes/edges need clearance above this
    timeout_s: float = 30.0


@dataclass
class GridSearchResult:
    path: np.ndarray
    expanded: int


def astar_plan(grid, sdf, start, goal, params: GridSearchParams | None = None,
               deadline: float | None = None) -> GridSearchResult:
    """Optimal 8-connected lattice path w.r.t. Euclidean edge cost.

    The lattice is anchored at the start; the goal is connected from any
    expanded node within one step. Fails with ``planning-failed`` when the
    free lattice component is exhausted or the wall-clock timeout expires.
    """
    params = params or GridSearchParams()
    if params.step <= 0:
        raise InvalidInputError("lattice step must be positive")
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    if not points_clear(sdf, start[None, :], params.safety_margin)[0]:
        raise InvalidInputError("start violates the safety margin")
    if not points_clear(sdf, goal[None, :], params.safety_margin)[0]:
        raise InvalidInputError("goal violates the safety margin")
    if deadline is None:
        deadline = time.monotonic() + params.timeout_s

    lo, hi = grid.extent()
    step = params.step

    def world(node):
        return start + np.array(node, dtype=float) * step

    def inside(p):
        return bool(np.all(p >= lo) and np.all(p <= hi))

    node_ok: dict[tuple[int, int], bool] = {}

    def valid(node):
        ok = node_ok.get(node)
        if ok is None:
            p = world(node)
            ok = inside(p) and bool(points_clear(sdf, p[None, :],
                                                 params.safety_margin)[0])
            node_ok[node] = ok
        return ok

    origin = (0, 0)
    open_heap = [(float(np.linalg.norm(goal - start)), 0, origin)]
    g_cost = {origin: 0.0}
    parents: dict[tuple[int, int], tuple[int, int]] = {}
    closed: set[tuple[int, int]] = set()
    expanded = 0
    tie = 0

    while open_heap:
        if time.monotonic() > deadline:
            raise PlanningFailedError("timeout", diagnostics={"expanded": expanded})
        _, _, node = heapq.heappop(open_heap)
        if node in closed:
            continue
        closed.add(node)
        expanded += 1
        p = world(node)

        if np.linalg.norm(goal - p) <= step and segment_clear(
                sdf, p, goal, params.safety_margin, grid.cell_size):
            chain = [node]
            while chain[-1] in parents:
                chain.append(parents[chain[-1]])
            points = [world(n) for n in reversed(chain)]
            if np.linalg.norm(points[-1] - goal) > 0:
                points.append(goal)
            return GridSearchResult(path=np.array(points), expanded=expanded)

        for dx, dy in _MOVES:
            nbr = (node[0] + dx, node[1] + dy)
            if nbr in closed or not valid(nbr):
                continue
            q = world(nbr)
            if not segment_clear(sdf, p, q, params.safety_margin, grid.cell_size):
                continue
            cand = g_cost[node] + step * math.hypot(dx, dy)
            if cand < g_cost.get(nbr, math.inf):
                g_cost[nbr] = cand
                parents[nbr] = node
                tie += 1
                heapq.heappush(open_heap,
                               (cand + float(np.linalg.norm(goal - q)), tie, nbr))

    raise PlanningFailedError("no-path", diagnostics={"expanded": expanded})
