"""Workspace and environment cost residuals with analytic Jacobians."""
from __future__ import annotations

import numpy as np

from .body import BodyModel


def _state_position(theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return theta[: theta.size // 2]


def obstacle_error(theta: np.ndarray, sdf, body: BodyModel, safety_margin: float,
                   sigma: float = 1.0):
    """Hinge clearance residual per body circle, whitened by ``sigma``.

    Circle j contributes max(0, safety_margin + radius_j - d(center_j)).
    Returns ``(residual (M,), jacobian (M, 2D))``; only the position block of
    the Jacobian is nonzero.
    """
    theta = np.asarray(theta, dtype=float)
    pos = _state_position(theta)
    centers = body.centers(pos)
    d, grad, _ = sdf.sample(centers)
    margin = safety_margin + body.radii
    active = d < margin
    res = np.where(active, margin - d, 0.0) / sigma
    jac = np.zeros((body.count, theta.size))
    jac[:, : pos.size] = np.where(active[:, None], -grad, 0.0) / sigma
    return res, jac


def environment_error(theta: np.ndarray, env, body: BodyModel, sigma: float = 1.0):
    """Energy-rate residual per body circle, whitened by ``sigma``."""
    theta = np.asarray(theta, dtype=float)
    pos = _state_position(theta)
    centers = body.centers(pos)
    e, grad, _ = env.sample_energy(centers)
    res = e / sigma
    jac = np.zeros((body.count, theta.size))
    jac[:, : pos.size] = grad / sigma
    return res, jac


def interpolated_error(error_fn, theta_i, theta_j, lam, psi, *args, **kwargs):
    """Chain a state-level cost through the interpolation coefficients.

    ``theta(tau) = lam theta_i + psi theta_j``; returns
    ``(residual, J_i, J_j)`` for the bracketing support states.
    """
    theta_tau = lam @ np.asarray(theta_i, float) + psi @ np.asarray(theta_j, float)
    res, jac = error_fn(theta_tau, *args, **kwargs)
    return res, jac @ lam, jac @ psi
