"""Shared geometry predicates and output conventions for the baselines."""
from __future__ import annotations

import numpy as np


def points_clear(sdf, points: np.ndarray, margin: float) -> np.ndarray:
    """True where the signed distance strictly exceeds the safety margin."""
    d, _, _ = sdf.sample(np.atleast_2d(points))
    return d > margin


def segment_clear(sdf, a, b, margin: float, spacing: float | None = None) -> bool:
    """Sample a segment (endpoints included) at <= spacing; all must be clear."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    spacing = spacing or sdf.cell_size
    n = max(2, int(np.ceil(np.linalg.norm(b - a) / spacing)) + 1)
    pts = a + np.linspace(0.0, 1.0, n)[:, None] * (b - a)
    return bool(points_clear(sdf, pts, margin).all())


def densify_polyline(points: np.ndarray, spacing: float = 1.0) -> np.ndarray:
    """Subdivide segments so consecutive samples are at most ``spacing`` apart."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if len(points) < 2:
        return points
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(b - a) / spacing)))
        for k in range(1, n + 1):
            out.append(a + (b - a) * k / n)
    return np.array(out)


def timed_states(points: np.ndarray, total_time: float):
    """Arclength-proportional timing with tangent velocities.

    Gives every baseline the same (t, x, y, vx, vy) output convention as the
    trajectory optimizer: the path is traversed in ``total_time`` at constant
    speed.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    length = float(seg.sum())
    if length <= 0.0:
        times = np.zeros(len(points))
        vel = np.zeros_like(points)
    else:
        arc = np.concatenate([[0.0], np.cumsum(seg)])
        times = arc / length * total_time
        speed = length / total_time
        tangents = np.zeros_like(points)
        tangents[:-1] = np.diff(points, axis=0) / np.maximum(seg[:, None], 1e-12)
        tangents[-1] = tangents[-2] if len(points) > 1 else 0.0
        vel = tangents * speed
    return times, np.column_stack([points, vel])
