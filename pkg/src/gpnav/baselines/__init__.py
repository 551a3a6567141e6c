"""Comparison planners sharing the optimizer's safety semantics."""
from .astar import GridSearchParams, GridSearchResult, astar_plan
from .common import densify_polyline, points_clear, segment_clear, timed_states
from .fmm import FmmParams, FmmResult, fmm_plan
from .rrt_star import RrtStarParams, rrt_star_plan

__all__ = [
    "GridSearchParams", "GridSearchResult", "astar_plan", "RrtStarParams",
    "rrt_star_plan", "FmmParams", "FmmResult", "fmm_plan", "points_clear",
    "segment_clear", "densify_polyline", "timed_states",
]
