"""Waypoint bearings and compass/symmetric angle conversions."""
from __future__ import annotations

import math

from .vessel import wrap_compass


def wrap_pi(angle: float) -> float:
    """Normalize an angle into (-pi, pi]."""
    wrapped = (angle + math.pi) % (2.0 * math.pi) - math.pi
    return math.pi if wrapped == -math.pi else wrapped


def to_compass(angle: float) -> float:
    """Map an angle from (-pi, pi] into the compass range (0, 2*pi].

    Positive angles are preserved; non-positive angles gain 2*pi. Inputs
    outside (-pi, pi] are wrapped into it first.
    """
    angle = wrap_pi(angle)
    return angle if angle > 0.0 else angle + 2.0 * math.pi


def from_compass(angle: float) -> float:
    """Inverse of :func:`to_compass`: (0, 2*pi] back to (-pi, pi]."""
    angle = wrap_compass(angle)
    return angle if angle <= math.pi else angle - 2.0 * math.pi


def refine_heading(e: float, n: float, e_w: float, n_w: float,
                   previous: float | None = None) -> float:
    """Desired compass heading from the current position to a waypoint.

    atan2(east offset, north offset) mapped into (0, 2*pi]. Coincident
    points keep the previous heading (due north if none is available).
    """
    de = e_w - e
    dn = n_w - n
    if de == 0.0 and dn == 0.0:
        return wrap_compass(previous) if previous is not None else 2.0 * math.pi
    return to_compass(math.atan2(de, dn))


def heading_error(desired: float, actual: float) -> float:
    """Shortest signed turn from ``actual`` to ``desired`` in (-pi, pi]."""
    return wrap_pi(desired - actual)
