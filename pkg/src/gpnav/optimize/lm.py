"""Damped Gauss-Newton (Levenberg-Marquardt) over stacked whitened residuals."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import InvalidInputError, NumericalConditioningError


@dataclass(frozen=True)
class LmSettings:
    """Classical multiplicative damping schedule."""

    initial_damping: float = 1e-4
    damping_increase: float = 10.0
    damping_decrease: float = 10.0
    max_damping: float = 1e10
    max_iterations: int = 100
    cost_abs_tol: float = 1e-18
    cost_rel_tol: float = 1e-6

    def __post_init__(self):
        if self.initial_damping <= 0 or self.max_damping <= 0:
            raise InvalidInputError("damping must be positive")
        if self.damping_increase <= 1 or self.damping_decrease <= 1:
            raise InvalidInputError("damping multipliers must exceed 1")
        if self.cost_abs_tol <= 0 or self.cost_rel_tol <= 0:
            raise InvalidInputError("tolerances must be positive")


@dataclass
class LmResult:
    states: np.ndarray
    cost_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    @property
    def cost(self) -> float:
        return self.cost_trace[-1]


def lm_solve(graph, initial_states: np.ndarray, settings: LmSettings | None = None,
             deadline: float | None = None) -> LmResult:
    """Minimize 0.5 ||r(x)||^2 for a graph exposing residuals_and_jacobian.

    Steps solve (J^T J + mu I) dx = -J^T r; only strictly improving steps are
    accepted, so the cost trace is strictly decreasing. Raises
    NumericalConditioningError (carrying the last iterate) if the damped
    normal equations cannot be factorized even at maximum damping.
    """
    settings = settings or LmSettings()
    x = np.asarray(initial_states, dtype=float).reshape(-1).copy()
    if not np.isfinite(x).all():
        raise InvalidInputError("initial states must be finite")

    r, jac = graph.residuals_and_jacobian(x)
    cost = 0.5 * float(r @ r)
    trace = [cost]
    mu = settings.initial_damping
    eye = np.eye(x.size)
    iterations = 0
    converged = cost <= settings.cost_abs_tol

    while not converged and iterations < settings.max_iterations:
        if deadline is not None and time.monotonic() > deadline:
            break
        iterations += 1
        hess = jac.T @ jac
        grad = jac.T @ r
        accepted = False
        while True:
            try:
                factor = scipy.linalg.cho_factor(hess + mu * eye)
                delta = scipy.linalg.cho_solve(factor, -grad)
                failed = not np.isfinite(delta).all()
            except (scipy.linalg.LinAlgError, ValueError):
                failed = True
            if failed:
                mu *= settings.damping_increase
                if mu > settings.max_damping:
                    raise NumericalConditioningError(
                        "damped normal equations not factorizable",
                        last_iterate=x.copy())
                continue
            x_new = x + delta
            r_new, jac_new = graph.residuals_and_jacobian(x_new)
            cost_new = 0.5 * float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new < cost:
                relative_drop = (cost - cost_new) / max(cost, 1e-300)
                x, r, jac, cost = x_new, r_new, jac_new, cost_new
                trace.append(cost)
                mu = max(mu / settings.damping_decrease, 1e-15)
                accepted = True
                if relative_drop < settings.cost_rel_tol or cost <= settings.cost_abs_tol:
                    converged = True
                break
            mu *= settings.damping_increase
            if mu > settings.max_damping:
                break
        if not accepted:
            # no improving step exists at maximum damping: local minimum
            converged = True

    state_dim = getattr(graph, "model", None)
    shape = (-1, state_dim.state_dim) if state_dim is not None else (-1,)
    return LmResult(states=x.reshape(*shape), cost_trace=trace,
                    iterations=iterations, converged=converged)
