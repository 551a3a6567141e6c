"""Factor graph over support states and its stochastic builder."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import InvalidInputError
from ..fields.bilinear import bilinear_sample_pair
from ..fields.workspace import Workspace
from ..gp.interpolation import coeff_blocks, expand_blocks
from ..gp.model import GpModel
from ..gp.prior import Whitener, noise_between, state_transition
from ..params import PlannerParams
from .body import BodyModel
from .montecarlo import McEstimate, estimate_obstacle_fraction


class FactorKind(str, Enum):
    PRIOR = "prior"
    GP_PRIOR = "gp_prior"
    OBSTACLE = "obstacle"
    INTERP_OBSTACLE = "interp_obstacle"
    ENVIRONMENT = "environment"
    INTERP_ENVIRONMENT = "interp_environment"


@dataclass
class Factor:
    """Structural record of one factor (used for dumps and inspection)."""

    kind: FactorKind
    states: tuple[int, ...]
    tau: float | None = None
    sigma: float | None = None
    mean: np.ndarray | None = None
    lam: np.ndarray | None = None
    psi: np.ndarray | None = None


@dataclass
class _FieldBlock:
    """Batched evaluation arrays for obstacle- or environment-type factors."""

    ii: np.ndarray        # (F,) left state index
    jj: np.ndarray        # (F,) right state index (== ii for support factors)
    lam_pos: np.ndarray   # (F, 2, state_dim) position rows of Lambda
    psi_pos: np.ndarray   # (F, 2, state_dim) position rows of Psi
    rows: np.ndarray      # (F,) first residual row of each factor
    res_idx: np.ndarray = None   # flat residual indices, filled by the graph
    flat_i: np.ndarray = None    # flat Jacobian indices for the left state
    flat_j: np.ndarray = None    # flat Jacobian indices for the right state

    @property
    def count(self) -> int:
        return self.ii.size


class FactorGraph:
    """Immutable least-squares problem: priors, motion priors, field costs.

    Built once, evaluated many times; residual/Jacobian evaluation is pure
    and thread-safe.
    """

    def __init__(self, model: GpModel, workspace: Workspace, body: BodyModel,
                 params: PlannerParams, factors: list[Factor],
                 interp_counts: list[int], estimates: list[McEstimate],
                 regions: list[tuple[np.ndarray, np.ndarray]],
                 capped_segments: list[int]):
        self.model = model
        self.workspace = workspace
        self.body = body
        self.params = params
        self.factors = factors
        self.interp_counts = interp_counts
        self.estimates = estimates
        self.regions = regions
        self.capped_segments = capped_segments

        sd = model.state_dim
        self.num_states = model.support_count
        self.num_variables = self.num_states * sd

        # Residual row layout: priors, GP priors, then field factors in
        # build order. Field factors contribute one row per body circle.
        self._priors: list[tuple[int, np.ndarray, np.ndarray, int]] = []
        self._gp: list[tuple[int, np.ndarray, np.ndarray, int]] = []
        obs_idx: list[Factor] = []
        env_idx: list[Factor] = []
        row = 0
        for f in factors:
            if f.kind is FactorKind.PRIOR:
                w = np.concatenate([
                    np.full(model.dim, 1.0 / params.position_prior_sigma),
                    np.full(model.dim, 1.0 / params.velocity_prior_sigma)])
                self._priors.append((f.states[0], f.mean, w, row))
                row += sd
            elif f.kind is FactorKind.GP_PRIOR:
                i, j = f.states
                wh = Whitener(noise_between(model.timestamps[i], model.timestamps[j],
                                            model.qc))
                phi = state_transition(model.timestamps[j], model.timestamps[i],
                                       model.dim)
                self._gp.append((i, wh.whiten(phi), -wh.whiten(np.eye(sd)), row))
                row += sd
            elif f.kind in (FactorKind.OBSTACLE, FactorKind.INTERP_OBSTACLE):
                f._row = row
                obs_idx.append(f)
                row += body.count
            else:
                f._row = row
                env_idx.append(f)
                row += body.count
        self.rows = row
        self._obs = self._build_block(obs_idx)
        self._env = self._build_block(env_idx)
        self._margin = params.safety_margin + body.radii  # (M,)

        # prior and motion-prior Jacobian blocks are state-independent
        self._jac_static = np.zeros((self.rows, self.num_variables))
        for k, _, w, r0 in self._priors:
            self._jac_static[r0:r0 + sd, k * sd:(k + 1) * sd] = np.diag(w)
        for i, wphi, wneg, r0 in self._gp:
            self._jac_static[r0:r0 + sd, i * sd:(i + 1) * sd] = wphi
            self._jac_static[r0:r0 + sd, (i + 1) * sd:(i + 2) * sd] = wneg
        for block in (self._obs, self._env):
            m = body.count
            rows_idx = (block.rows[:, None] + np.arange(m)[None, :])  # (F, M)
            block.res_idx = rows_idx.reshape(-1)
            cols_i = block.ii * sd
            cols_j = block.jj * sd
            flat_i = (rows_idx[:, :, None] * self.num_variables
                      + cols_i[:, None, None] + np.arange(sd)[None, None, :])
            flat_j = (rows_idx[:, :, None] * self.num_variables
                      + cols_j[:, None, None] + np.arange(sd)[None, None, :])
            block.flat_i = flat_i.reshape(-1)
            block.flat_j = flat_j.reshape(-1)
        self._paired = (
            self._obs.count == self._env.count
            and np.array_equal(self._obs.ii, self._env.ii)
            and np.array_equal(self._obs.jj, self._env.jj)
            and np.array_equal(self._obs.lam_pos, self._env.lam_pos)
            and np.array_equal(self._obs.psi_pos, self._env.psi_pos)
            and self.workspace.sdf.values.shape == self.workspace.env.energy_rate.shape)

    def _build_block(self, factors: list[Factor]) -> _FieldBlock:
        sd = self.model.state_dim
        d = self.model.dim
        n = len(factors)
        ii = np.zeros(n, dtype=int)
        jj = np.zeros(n, dtype=int)
        lam_pos = np.zeros((n, d, sd))
        psi_pos = np.zeros((n, d, sd))
        rows = np.zeros(n, dtype=int)
        pick_pos = np.zeros((d, sd))
        pick_pos[:, :d] = np.eye(d)
        for k, f in enumerate(factors):
            rows[k] = f._row
            if f.lam is None:  # support-state factor
                ii[k] = jj[k] = f.states[0]
                lam_pos[k] = pick_pos
            else:
                ii[k], jj[k] = f.states
                lam_pos[k] = f.lam[:d, :]
                psi_pos[k] = f.psi[:d, :]
        return _FieldBlock(ii=ii, jj=jj, lam_pos=lam_pos, psi_pos=psi_pos, rows=rows)

    # ---- evaluation ----------------------------------------------------

    def _check_states(self, states: np.ndarray) -> np.ndarray:
        x = np.asarray(states, dtype=float)
        if x.size != self.num_variables:
            raise InvalidInputError(
                f"expected {self.num_states} states of dim {self.model.state_dim}, "
                f"got array of size {x.size}")
        return x.reshape(self.num_states, self.model.state_dim)

    def _block_eval(self, block: _FieldBlock, x: np.ndarray):
        """Positions (F, M, 2) of every body circle for one factor block."""
        pos = (np.einsum("fkc,fc->fk", block.lam_pos, x[block.ii])
               + np.einsum("fkc,fc->fk", block.psi_pos, x[block.jj]))
        return pos[:, None, :] + self.body.offsets[None, :, :]

    def residuals_and_jacobian(self, states: np.ndarray, with_jacobian: bool = True):
        x = self._check_states(states)
        sd = self.model.state_dim
        r = np.zeros(self.rows)
        jac = self._jac_static.copy() if with_jacobian else None

        for k, mean, w, row in self._priors:
            r[row:row + sd] = w * (x[k] - mean)
        for i, wphi, wneg, row in self._gp:
            r[row:row + sd] = wphi @ x[i] + wneg @ x[i + 1]

        m = self.body.count
        if self._paired and self._obs.count:
            # obstacle/environment factors share states and taus pairwise, so
            # one geometry pass samples both fields
            centers = self._block_eval(self._obs, x).reshape(-1, 2)
            d_vals, d_grads, e_vals, e_grads = bilinear_sample_pair(
                self.workspace.sdf.values, self.workspace.env.energy_rate,
                self.workspace.sdf.cell_size, self.workspace.sdf.origin, centers)
            self._scatter_obstacle(r, jac, d_vals, d_grads, m, with_jacobian)
            self._scatter(r, jac, self._env,
                          e_vals.reshape(-1, m) / self.params.sigma_env,
                          e_grads.reshape(-1, m, 2) / self.params.sigma_env,
                          with_jacobian)
            return (r, jac) if with_jacobian else r
        if self._obs.count:
            centers = self._block_eval(self._obs, x)
            d_vals, grads, _ = self.workspace.sdf.sample(centers.reshape(-1, 2))
            self._scatter_obstacle(r, jac, d_vals, grads, m, with_jacobian)
        if self._env.count:
            centers = self._block_eval(self._env, x)
            e_vals, grads, _ = self.workspace.env.sample_energy(centers.reshape(-1, 2))
            res = e_vals.reshape(-1, m) / self.params.sigma_env
            self._scatter(r, jac, self._env, res,
                          grads.reshape(-1, m, 2) / self.params.sigma_env,
                          with_jacobian)
        return (r, jac) if with_jacobian else r

    def _scatter_obstacle(self, r, jac, d_vals, grads, m, with_jacobian):
        d_vals = d_vals.reshape(-1, m)
        active = d_vals < self._margin
        res = np.where(active, self._margin - d_vals, 0.0) / self.params.sigma_obs
        dpos = np.where(active.reshape(-1)[:, None], -grads, 0.0) \
            .reshape(-1, m, 2) / self.params.sigma_obs
        self._scatter(r, jac, self._obs, res, dpos, with_jacobian)

    def _scatter(self, r, jac, block: _FieldBlock, res, dpos, with_jacobian):
        r[block.res_idx] = res.reshape(-1)
        if not with_jacobian:
            return
        j_i = np.einsum("fmk,fkc->fmc", dpos, block.lam_pos)
        j_j = np.einsum("fmk,fkc->fmc", dpos, block.psi_pos)
        flat = jac.reshape(-1)
        np.add.at(flat, block.flat_i, j_i.reshape(-1))
        np.add.at(flat, block.flat_j, j_j.reshape(-1))

    def residuals(self, states: np.ndarray) -> np.ndarray:
        return self.residuals_and_jacobian(states, with_jacobian=False)

    def objective(self, states: np.ndarray) -> float:
        r = self.residuals(states)
        return 0.5 * float(r @ r)

    # ---- diagnostics ----------------------------------------------------

    def structure(self) -> dict:
        """JSON-friendly dump of the factor layout for regression snapshots."""
        out = []
        for f in self.factors:
            entry: dict = {"kind": f.kind.value, "states": list(f.states)}
            if f.tau is not None:
                entry["tau"] = f.tau
            if f.sigma is not None:
                entry["sigma"] = f.sigma
            out.append(entry)
        return {"support_count": self.num_states,
                "state_dim": self.model.state_dim,
                "interp_counts": list(self.interp_counts),
                "factors": out}

    def structure_json(self) -> str:
        return json.dumps(self.structure(), sort_keys=True)


def graph_objective(graph: FactorGraph, states: np.ndarray) -> float:
    """Half the squared norm of all whitened residuals."""
    return graph.objective(states)


def build_factor_graph(model: GpModel, workspace: Workspace, body: BodyModel,
                       params: PlannerParams, start: np.ndarray, goal: np.ndarray,
                       rng=None) -> FactorGraph:
    """Assemble the planning graph for one solve.

    Adds start/goal priors; per segment one obstacle + one environment factor
    on the left support state plus ``N_j`` interpolated factor pairs at
    uniformly spaced times inside the segment. With ``interpolation == "mc"``
    the count is ``round(interp_scale * P_obs)`` where ``P_obs`` is the
    Monte-Carlo obstacle fraction of the safety-inflated bounding box of the
    segment's endpoint positions (on the straight-line initialization);
    otherwise a constant ``fixed_interp`` is used. Reproducible from the seed.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    d = model.dim
    ts = model.timestamps
    total = model.total_time

    factors: list[Factor] = [Factor(FactorKind.PRIOR, (0,), mean=start,
                                    sigma=params.position_prior_sigma)]
    interp_counts: list[int] = []
    estimates: list[McEstimate] = []
    regions: list[tuple[np.ndarray, np.ndarray]] = []
    capped: list[int] = []

    # straight-line support positions drive the per-segment sampling regions
    alphas = (ts - ts[0]) / total
    line = start[:d] + alphas[:, None] * (goal[:d] - start[:d])

    for i in range(model.segments):
        factors.append(Factor(FactorKind.GP_PRIOR, (i, i + 1)))
        factors.append(Factor(FactorKind.OBSTACLE, (i,), sigma=params.sigma_obs))
        factors.append(Factor(FactorKind.ENVIRONMENT, (i,), sigma=params.sigma_env))

        lo = np.minimum(line[i], line[i + 1]) - params.safety_margin
        hi = np.maximum(line[i], line[i + 1]) + params.safety_margin
        regions.append((lo, hi))
        if params.interpolation == "mc":
            est = estimate_obstacle_fraction(workspace.grid, (lo, hi),
                                             params.mc_samples, rng)
            estimates.append(est)
            n_j = int(round(params.interp_scale * est.p_obs))
        else:
            n_j = params.fixed_interp
        if n_j > params.interp_cap:
            n_j = params.interp_cap
            capped.append(i)
        interp_counts.append(n_j)

        if n_j > 0:
            delta = ts[i + 1] - ts[i]
            offs = delta * np.arange(1, n_j + 1) / (n_j + 1)
            lam2, psi2 = coeff_blocks(offs, delta)
            lams = expand_blocks(lam2, d)
            psis = expand_blocks(psi2, d)
            for k in range(n_j):
                tau = float(ts[i] + offs[k])
                factors.append(Factor(FactorKind.INTERP_OBSTACLE, (i, i + 1),
                                      tau=tau, sigma=params.sigma_obs,
                                      lam=lams[k], psi=psis[k]))
                factors.append(Factor(FactorKind.INTERP_ENVIRONMENT, (i, i + 1),
                                      tau=tau, sigma=params.sigma_env,
                                      lam=lams[k], psi=psis[k]))

    factors.append(Factor(FactorKind.PRIOR, (model.segments,), mean=goal,
                          sigma=params.position_prior_sigma))
    return FactorGraph(model=model, workspace=workspace, body=body, params=params,
                       factors=factors, interp_counts=interp_counts,
                       estimates=estimates, regions=regions, capped_segments=capped)
