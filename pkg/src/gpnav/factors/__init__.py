"""Factor categories, Monte-Carlo estimation and the graph builder."""
from .body import BodyModel
from .costs import environment_error, interpolated_error, obstacle_error
from .graph import Factor, FactorGraph, FactorKind, build_factor_graph, graph_objective
from .montecarlo import McEstimate, estimate_obstacle_fraction, exact_obstacle_fraction

__all__ = [
    "BodyModel", "Factor", "FactorGraph", "FactorKind", "McEstimate",
    "build_factor_graph", "graph_objective", "estimate_obstacle_fraction",
    "exact_obstacle_fraction", "obstacle_error", "environment_error",
    "interpolated_error",
]
