"""Sampling planner with rewiring, stopped at the first feasible goal link."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError, PlanningFailedError
from .common import points_clear, segment_clear


@dataclass(frozen=True)
class RrtStarParams:
    step: float = 10.0
    goal_bias: float = 0.05
    max_samples: int = 200_000
    gamma: float | None = None   # rewiring radius scale; None = from free area
    safety_margin: float = 20.0
    timeout_s: float = 30.0

    def __post_init__(self):
        if self.step <= 0:
            raise InvalidInputError("step must be positive")
        if not (0.0 <= self.goal_bias < 1.0):
            raise InvalidInputError("goal bias must be in [0, 1)")


def rrt_star_plan(grid, sdf, start, goal, params: RrtStarParams | None = None,
                  rng=None, deadline: float | None = None) -> np.ndarray:
    """Sample-extend-rewire until the goal connects; deterministic per seed.

    Tree growth terminates as soon as a node reaches within one step of the
    goal with a clear connecting segment, so the returned path is feasible
    but not asymptotically optimal.
    """
    params = params or RrtStarParams()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    if not points_clear(sdf, start[None, :], params.safety_margin)[0]:
        raise InvalidInputError("start violates the safety margin")
    if not points_clear(sdf, goal[None, :], params.safety_margin)[0]:
        raise InvalidInputError("goal violates the safety margin")
    if deadline is None:
        deadline = time.monotonic() + params.timeout_s

    lo, hi = grid.extent()
    gamma = params.gamma
    if gamma is None:
        free_area = (1.0 - grid.obstacle_fraction()) * np.prod(hi - lo)
        gamma = 2.0 * math.sqrt(1.5 * free_area / math.pi)

    nodes = np.empty((params.max_samples + 1, 2))
    nodes[0] = start
    parents = [-1]
    costs = [0.0]
    n = 1

    def extract(idx):
        chain = [goal]
        while idx >= 0:
            chain.append(nodes[idx].copy())
            idx = parents[idx]
        return np.array(chain[::-1])

    # immediate connection: the tree root may already see the goal
    if np.linalg.norm(goal - start) <= params.step and segment_clear(
            sdf, start, goal, params.safety_margin, grid.cell_size):
        return np.array([start, goal])

    for attempt in range(params.max_samples):
        if time.monotonic() > deadline:
            raise PlanningFailedError("timeout", diagnostics={"nodes": n})
        target = goal if rng.random() < params.goal_bias else rng.uniform(lo, hi)
        dists = np.linalg.norm(nodes[:n] - target, axis=1)
        nearest = int(np.argmin(dists))
        dist = dists[nearest]
        if dist < 1e-9:
            continue
        new = nodes[nearest] + (target - nodes[nearest]) * min(1.0, params.step / dist)
        if not points_clear(sdf, new[None, :], params.safety_margin)[0]:
            continue

        # canonical connection radius min{gamma (log n / n)^(1/2), eta}
        radius = min(gamma * math.sqrt(math.log(n + 1) / (n + 1)), params.step)
        near_d = np.linalg.norm(nodes[:n] - new, axis=1)
        near_idx = np.flatnonzero(near_d <= radius)
        if near_idx.size == 0:
            near_idx = np.array([nearest])

        # cheapest collision-free parent among the neighbourhood
        best_parent, best_cost = -1, math.inf
        for k in near_idx:
            cand = costs[k] + near_d[k]
            if cand < best_cost and segment_clear(sdf, nodes[k], new,
                                                  params.safety_margin,
                                                  grid.cell_size):
                best_parent, best_cost = int(k), cand
        if best_parent < 0:
            continue
        nodes[n] = new
        parents.append(best_parent)
        costs.append(best_cost)
        new_idx = n
        n += 1

        # rewire the neighbourhood through the new node
        for k in near_idx:
            cand = best_cost + near_d[k]
            if cand + 1e-12 < costs[k] and segment_clear(sdf, new, nodes[k],
                                                         params.safety_margin,
                                                         grid.cell_size):
                parents[k] = new_idx
                costs[k] = cand

        if np.linalg.norm(goal - new) <= params.step and segment_clear(
                sdf, new, goal, params.safety_margin, grid.cell_size):
            return extract(new_idx)

    raise PlanningFailedError("sample budget exhausted", diagnostics={"nodes": n})
