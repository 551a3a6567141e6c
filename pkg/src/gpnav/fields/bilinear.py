"""Bilinear sampling of cell-centred rasters with analytic gradients."""
from __future__ import annotations

import numpy as np


def bilinear_sample(values: np.ndarray, cell_size: float, origin: np.ndarray,
                    points: np.ndarray):
    """Sample a raster at continuous world points.

    ``values[row, col]`` is the sample at world point
    ``origin + (col, row) * cell_size``. Queries outside the raster are
    clamped to the boundary (flag returned) so callers never read past the
    map; the gradient along a clamped axis is zero, matching the derivative
    of the clamped surface.

    Returns ``(vals (n,), grads (n, 2), clamped (n,) bool)``.
    """
    values = np.asarray(values, dtype=float)
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    h, w = values.shape

    px = (pts[:, 0] - origin[0]) / cell_size
    py = (pts[:, 1] - origin[1]) / cell_size
    cx = np.clip(px, 0.0, w - 1.0)
    cy = np.clip(py, 0.0, h - 1.0)
    clamped_x = cx != px
    clamped_y = cy != py

    x0 = cx.astype(int)
    y0 = cy.astype(int)
    if w > 1:
        np.minimum(x0, w - 2, out=x0)
    if h > 1:
        np.minimum(y0, h - 2, out=y0)
    fx = cx - x0
    fy = cy - y0
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)

    v00 = values[y0, x0]
    v01 = values[y0, x1]
    v10 = values[y1, x0]
    v11 = values[y1, x1]

    top = v01 - v00
    bottom = v11 - v10
    left = v10 - v00
    vals = v00 + fx * top + fy * (left + fx * (bottom - top))

    gx = (top + fy * (bottom - top)) / cell_size
    gy = (left + fx * ((v11 - v01) - left)) / cell_size
    gx[clamped_x] = 0.0
    gy[clamped_y] = 0.0
    return vals, np.stack([gx, gy], axis=1), clamped_x | clamped_y


def bilinear_sample_pair(values_a: np.ndarray, values_b: np.ndarray,
                         cell_size: float, origin: np.ndarray, points: np.ndarray):
    """Sample two equally shaped rasters at the same points in one pass.

    Shares the index/weight computation of :func:`bilinear_sample`; returns
    ``(vals_a, grads_a, vals_b, grads_b)`` with clamped-axis gradients zeroed.
    """
    pts = np.asarray(points, dtype=float)
    h, w = values_a.shape
    px = (pts[:, 0] - origin[0]) / cell_size
    py = (pts[:, 1] - origin[1]) / cell_size
    cx = np.clip(px, 0.0, w - 1.0)
    cy = np.clip(py, 0.0, h - 1.0)
    clamped_x = cx != px
    clamped_y = cy != py
    x0 = cx.astype(int)
    y0 = cy.astype(int)
    if w > 1:
        np.minimum(x0, w - 2, out=x0)
    if h > 1:
        np.minimum(y0, h - 2, out=y0)
    fx = cx - x0
    fy = cy - y0
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)

    out = []
    for values in (values_a, values_b):
        v00 = values[y0, x0]
        v01 = values[y0, x1]
        v10 = values[y1, x0]
        v11 = values[y1, x1]
        top = v01 - v00
        bottom = v11 - v10
        left = v10 - v00
        vals = v00 + fx * top + fy * (left + fx * (bottom - top))
        gx = (top + fy * (bottom - top)) / cell_size
        gy = (left + fx * ((v11 - v01) - left)) / cell_size
        gx[clamped_x] = 0.0
        gy[clamped_y] = 0.0
        out += [vals, np.stack([gx, gy], axis=1)]
    return tuple(out)


def query_bilinear(field, point):
    """Single-point convenience wrapper over :func:`bilinear_sample`.

    ``field`` needs ``values``, ``cell_size`` and ``origin`` attributes.
    Returns ``(value, gradient (2,), clamped)``.
    """
    vals, grads, clamped = bilinear_sample(field.values, field.cell_size,
                                           field.origin, np.asarray(point, float))
    return float(vals[0]), grads[0], bool(clamped[0])
