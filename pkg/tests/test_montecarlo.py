import numpy as np
import pytest

from gpnav.errors import InvalidInputError
from gpnav.factors import estimate_obstacle_fraction, exact_obstacle_fraction
from gpnav.fields import OccupancyGrid


def test_all_free_region():
    grid = OccupancyGrid(np.zeros((20, 20), dtype=np.uint8))
    est = estimate_obstacle_fraction(grid, n_samples=500, rng=0)
    assert est.p_obs == 0.0
    assert est.n_accepted == est.n_samples == 500


def test_all_obstacle_region():
    grid = OccupancyGrid(np.ones((20, 20), dtype=np.uint8))
    est = estimate_obstacle_fraction(grid, n_samples=200, rng=0)
    assert est.p_obs == 1.0
    assert est.n_accepted == 0


def test_half_obstacle_within_binomial_bound():
    cells = np.zeros((100, 100), dtype=np.uint8)
    cells[:, 50:] = 1
    grid = OccupancyGrid(cells)
    est = estimate_obstacle_fraction(grid, n_samples=10_000, rng=123)
    # 3 sigma of a Bernoulli(0.5) mean over 10^4 samples
    assert abs(est.p_obs - 0.5) <= 0.015


def test_exhaustive_sampling_is_exact():
    rng = np.random.default_rng(5)
    cells = (rng.random((40, 40)) < 0.3).astype(np.uint8)
    grid = OccupancyGrid(cells)
    est = exact_obstacle_fraction(grid)
    assert est.n_samples == 1600
    assert est.p_obs == pytest.approx(cells.mean())


def test_exhaustive_respects_sub_region():
    cells = np.zeros((10, 10), dtype=np.uint8)
    cells[:, :5] = 1
    grid = OccupancyGrid(cells)
    est = exact_obstacle_fraction(grid, bounds=([-0.5, -0.5], [4.5, 9.5]))
    assert est.p_obs == pytest.approx(1.0)


def test_deterministic_for_fixed_seed():
    rng = np.random.default_rng(1)
    cells = (rng.random((30, 30)) < 0.4).astype(np.uint8)
    grid = OccupancyGrid(cells)
    a = estimate_obstacle_fraction(grid, n_samples=400, rng=42)
    b = estimate_obstacle_fraction(grid, n_samples=400, rng=42)
    assert a.p_obs == b.p_obs
    assert a.n_accepted == b.n_accepted


def test_convergence_rate_halves_when_samples_quadruple():
    rng = np.random.default_rng(9)
    cells = (rng.random((64, 64)) < 0.3).astype(np.uint8)
    grid = OccupancyGrid(cells)
    truth = cells.mean()

    def rmse(n, trials=200):
        errs = [estimate_obstacle_fraction(grid, n_samples=n, rng=seed).p_obs - truth
                for seed in range(trials)]
        return float(np.sqrt(np.mean(np.square(errs))))

    ratio = rmse(1024) / rmse(256)
    assert 0.35 <= ratio <= 0.65


def test_invalid_inputs():
    grid = OccupancyGrid(np.zeros((5, 5), dtype=np.uint8))
    with pytest.raises(InvalidInputError):
        estimate_obstacle_fraction(grid, n_samples=0)
    with pytest.raises(InvalidInputError):
        estimate_obstacle_fraction(grid, bounds=([10.0, 10.0], [20.0, 20.0]))
