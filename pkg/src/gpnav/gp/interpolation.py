"""Fast conditional interpolation of states between two support states."""
from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .prior import _noise_block, state_transition


def interpolation_coeffs(t_i: float, t_j: float, tau: float, qc: np.ndarray):
    """Coefficient pair (Lambda, Psi) expressing theta(tau) from its bracket.

    Psi(tau) = Q_{i,tau} Phi(t_j, tau)^T Q_{i,j}^{-1}
    Lambda(tau) = Phi(tau, t_i) - Psi(tau) Phi(t_j, t_i)

    At tau = t_i this reduces to (I, 0) and at tau = t_j to (0, I).
    """
    if not (t_i <= tau <= t_j) or t_j <= t_i:
        raise InvalidInputError(f"tau={tau} outside segment [{t_i}, {t_j}]")
    qc = np.asarray(qc, dtype=float)
    dim = qc.shape[0]
    q_itau = _noise_block(tau - t_i, qc)
    q_ij = _noise_block(t_j - t_i, qc)
    psi = np.linalg.solve(q_ij.T, (q_itau @ state_transition(t_j, tau, dim).T).T).T
    lam = state_transition(tau, t_i, dim) - psi @ state_transition(t_j, t_i, dim)
    return lam, psi


def interpolate(theta_i: np.ndarray, theta_j: np.ndarray, t_i: float, t_j: float,
                tau: float, qc: np.ndarray):
    """Conditional-mean state at tau given the two bracketing support states.

    With the zero-control prior the mean terms cancel and the interpolant is
    the plain combination Lambda theta_i + Psi theta_j. Returns
    ``(theta_tau, Lambda, Psi)``.
    """
    lam, psi = interpolation_coeffs(t_i, t_j, tau, qc)
    theta_tau = lam @ np.asarray(theta_i, float) + psi @ np.asarray(theta_j, float)
    return theta_tau, lam, psi


def coeff_blocks(offsets: np.ndarray, delta: float):
    """Closed-form 2x2 coefficient blocks for offsets into a segment.

    The noise-covariance and transition matrices of the double integrator
    are Kronecker products with the spectral-density matrix, which cancels in
    Psi = Q_{i,tau} Phi^T Q_{i,j}^{-1}; what remains are scalar 2x2 blocks
    acting on the (position, velocity) pair of each workspace axis.
    Returns ``(lam2 (K, 2, 2), psi2 (K, 2, 2))``.
    """
    s = np.asarray(offsets, dtype=float)
    if delta <= 0:
        raise InvalidInputError("segment duration must be positive")
    if np.any(s < 0) or np.any(s > delta):
        raise InvalidInputError("offsets must lie inside [0, delta]")
    e = delta - s
    k = s.size
    s_cov = np.empty((k, 2, 2))
    s_cov[:, 0, 0] = s ** 3 / 3.0
    s_cov[:, 0, 1] = s_cov[:, 1, 0] = s ** 2 / 2.0
    s_cov[:, 1, 1] = s
    phi_to_j_t = np.zeros((k, 2, 2))
    phi_to_j_t[:, 0, 0] = 1.0
    phi_to_j_t[:, 1, 0] = e
    phi_to_j_t[:, 1, 1] = 1.0
    seg_cov_inv = (12.0 / delta ** 4) * np.array(
        [[delta, -delta ** 2 / 2.0],
         [-delta ** 2 / 2.0, delta ** 3 / 3.0]])
    psi2 = s_cov @ phi_to_j_t @ seg_cov_inv
    phi_s = np.zeros((k, 2, 2))
    phi_s[:, 0, 0] = phi_s[:, 1, 1] = 1.0
    phi_s[:, 0, 1] = s
    phi_delta = np.array([[1.0, delta], [0.0, 1.0]])
    lam2 = phi_s - psi2 @ phi_delta
    return lam2, psi2


def expand_blocks(blocks: np.ndarray, dim: int) -> np.ndarray:
    """Lift (K, 2, 2) scalar blocks to (K, 2*dim, 2*dim) state matrices."""
    eye = np.eye(dim)
    k = blocks.shape[0]
    return np.einsum("kab,ij->kaibj", blocks, eye).reshape(k, 2 * dim, 2 * dim)
