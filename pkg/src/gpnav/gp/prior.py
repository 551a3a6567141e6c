"""State-transition and process-noise blocks of the double-integrator prior."""
from __future__ import annotations

import numpy as np
import scipy.linalg

from ..errors import InvalidIntervalError, NumericalConditioningError


def state_transition(t: float, s: float, dim: int) -> np.ndarray:
    """Transition matrix [[I, (t-s) I], [0, I]] of the zero-acceleration flow."""
    if t < s:
        raise InvalidIntervalError(f"transition requires t >= s, got t={t}, s={s}")
    out = np.eye(2 * dim)
    out[:dim, dim:] = (t - s) * np.eye(dim)
    return out


def _noise_block(dt: float, qc: np.ndarray) -> np.ndarray:
    """Closed-form covariance block for elapsed dt >= 0 (internal, no checks)."""
    d = qc.shape[0]
    out = np.zeros((2 * d, 2 * d))
    out[:d, :d] = (dt ** 3 / 3.0) * qc
    out[:d, d:] = (dt ** 2 / 2.0) * qc
    out[d:, :d] = (dt ** 2 / 2.0) * qc
    out[d:, d:] = dt * qc
    return out


def noise_between(t_a: float, t_b: float, qc: np.ndarray) -> np.ndarray:
    """Integrated white-noise covariance accumulated from t_a to t_b.

    Double-integrator closed form:
    [[dt^3/3 Qc, dt^2/2 Qc], [dt^2/2 Qc, dt Qc]].
    """
    if t_b <= t_a:
        raise InvalidIntervalError(f"noise block requires t_b > t_a, got [{t_a}, {t_b}]")
    return _noise_block(t_b - t_a, np.asarray(qc, dtype=float))


class Whitener:
    """Cholesky whitener r -> L^-1 r for an SPD covariance."""

    def __init__(self, covariance: np.ndarray):
        try:
            self._chol = scipy.linalg.cholesky(covariance, lower=True)
        except scipy.linalg.LinAlgError as exc:
            raise NumericalConditioningError(
                f"covariance block is not positive definite: {exc}") from exc

    def whiten(self, arr: np.ndarray) -> np.ndarray:
        return scipy.linalg.solve_triangular(self._chol, arr, lower=True)


def gp_prior_error(theta_i: np.ndarray, theta_j: np.ndarray, t_i: float,
                   t_j: float, qc: np.ndarray):
    """Whitened constant-velocity propagation residual between two states.

    Residual is Phi(t_j, t_i) theta_i - theta_j (zero control input), whitened
    by the inverse Cholesky factor of the segment noise block. Returns
    ``(residual, J_i, J_j)``.
    """
    qc = np.asarray(qc, dtype=float)
    dim = qc.shape[0]
    phi = state_transition(t_j, t_i, dim)
    wh = Whitener(noise_between(t_i, t_j, qc))
    residual = wh.whiten(phi @ np.asarray(theta_i, float) - np.asarray(theta_j, float))
    j_i = wh.whiten(phi)
    j_j = -wh.whiten(np.eye(2 * dim))
    return residual, j_i, j_j
