import numpy as np
import pytest

from hlasso import build_group_structure, standardize


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def lattice_argmax(objective, m, lo, hi, target_step=1e-3):
    """Brute-force maximizer over [lo, hi]^m by iterative lattice refinement.

    Evaluates a 21-point-per-axis grid, recenters on the best point and
    shrinks the step by 5x until it reaches ``target_step``. For the
    (concave) solver objectives this tracks the global maximizer.
    """
    centers = np.full(m, (lo + hi) / 2.0)
    step = (hi - lo) / 20.0
    while True:
        axes = [
            np.clip(np.arange(-10, 11) * step + centers[i], lo, hi)
            for i in range(m)
        ]
        grids = np.meshgrid(*axes, indexing="ij")
        cand = np.stack([g.ravel() for g in grids], axis=1)
        values = objective(cand)
        centers = cand[int(np.argmax(values))]
        if step <= target_step / 2.0:
            return centers
        step /= 5.0


def lasso_objective(X, y, penalty):
    def obj(cand):
        resid = y[None, :] - cand @ X.T
        return -0.5 * np.sum(resid * resid, axis=1) - np.abs(cand) @ penalty

    return obj


def garrote_objective(X, y, penalty):
    def obj(cand):
        resid = y[None, :] - cand @ X.T
        return -0.5 * np.sum(resid * resid, axis=1) - cand @ penalty

    return obj


def orthonormal_dataset(n, p, rng, coef=None, noise=0.3):
    """StandardizedDataset whose design has exactly orthonormal columns."""
    M = rng.standard_normal((n, p))
    M -= M.mean(axis=0)
    Q, _ = np.linalg.qr(M)
    X = Q[:, :p]
    if coef is None:
        coef = rng.uniform(-3.0, 3.0, p)
    y = X @ coef + noise * rng.standard_normal(n)
    return standardize(X, y)


def two_group_structure(p=6):
    half = p // 2
    return build_group_structure(
        [list(range(half)), list(range(half, p))], p
    )


def random_gaussian_problem(rng, n=50, p=6, snr_noise=1.0):
    X = rng.standard_normal((n, p))
    beta = rng.uniform(-2.0, 2.0, p)
    y = X @ beta + snr_noise * rng.standard_normal(n)
    return standardize(X, y), two_group_structure(p)
