"""Inner convex subproblems: weighted L1 least squares and the non-negative
garrote, solved by cyclic coordinate descent with covariance updates.

Both solvers maximize a penalized least-squares criterion,

    lasso:    -1/2 ||y - X a||^2 - sum_j penalty_j |a_j|
    garrote:  -1/2 ||y - Xt d||^2 - sum_k penalty_k d_k,   d >= 0,

and stop when the subgradient KKT residual is below ``tol``. The KKT
residual is re-verified against a freshly recomputed gradient before
returning, so accumulated float drift in the covariance updates cannot
produce a false convergence claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

__all__ = [
    "ConvergenceError",
    "LassoSubproblem",
    "GarroteSubproblem",
    "soft_threshold",
    "solve_weighted_lasso",
    "solve_nonneg_garrote",
    "kkt_residual",
]


class ConvergenceError(RuntimeError):
    """Raised when a solver exhausts max_iter; carries the last iterate."""

    def __init__(self, message: str, last_iterate: np.ndarray):
        super().__init__(message)
        self.last_iterate = last_iterate


def soft_threshold(z: float, t: float) -> float:
    """sgn(z) * max(|z| - t, 0). Requires t >= 0."""
    if t < 0:
        raise ValueError("threshold must be non-negative")
    return math.copysign(max(abs(z) - t, 0.0), z)


@dataclass
class LassoSubproblem:
    """Weighted L1 least squares data: design, response, per-coefficient
    penalty (absorbing lambda times any adaptive weight), and a warm start."""

    X: np.ndarray
    y: np.ndarray
    penalty: np.ndarray
    init: np.ndarray | None = None

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64).ravel()
        m = self.X.shape[1]
        self.penalty = np.broadcast_to(
            np.asarray(self.penalty, dtype=np.float64), (m,)
        ).copy()
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError("X and y have inconsistent sample counts")
        if (self.penalty < 0).any():
            raise ValueError("penalties must be non-negative")
        if self.init is not None:
            self.init = np.asarray(self.init, dtype=np.float64).ravel()
            if self.init.shape != (m,):
                raise ValueError("warm start has wrong length")


@dataclass
class GarroteSubproblem:
    """Non-negative garrote data: group pseudo-covariates, response, and a
    per-group linear penalty (all ones in the single-lambda scaling)."""

    Xtilde: np.ndarray
    y: np.ndarray
    penalty: np.ndarray = field(default_factory=lambda: np.array(1.0))
    init: np.ndarray | None = None

    def __post_init__(self):
        self.Xtilde = np.ascontiguousarray(self.Xtilde, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64).ravel()
        k = self.Xtilde.shape[1]
        self.penalty = np.broadcast_to(
            np.asarray(self.penalty, dtype=np.float64), (k,)
        ).copy()
        if self.Xtilde.shape[0] != self.y.shape[0]:
            raise ValueError("Xtilde and y have inconsistent sample counts")
        if (self.penalty < 0).any():
            raise ValueError("penalties must be non-negative")
        if self.init is not None:
            self.init = np.asarray(self.init, dtype=np.float64).ravel()
            if self.init.shape != (k,):
                raise ValueError("warm start has wrong length")


# --- numba kernels (Gram form) ---------------------------------------------
#
# State: c = X'y - G @ coef, maintained incrementally. Every coordinate
# update maximizes the 1-d restriction exactly, so each sweep is a monotone
# ascent step on the penalized objective.


@njit(cache=True)
def _lasso_kkt(c, pen, coef, diag):
    worst = 0.0
    for j in range(coef.shape[0]):
        if diag[j] <= 0.0:
            continue
        if coef[j] == 0.0:
            v = abs(c[j]) - pen[j]
            if v > worst:
                worst = v
        else:
            s = 1.0 if coef[j] > 0.0 else -1.0
            v = abs(c[j] - pen[j] * s)
            if v > worst:
                worst = v
    return worst


@njit(cache=True)
def _lasso_cd(G, c, pen, coef, diag, tol, max_sweeps):
    m = coef.shape[0]
    sweeps = 0
    stalled = False
    kkt = _lasso_kkt(c, pen, coef, diag)
    while kkt > tol and sweeps < max_sweeps and not stalled:
        changed = False
        for j in range(m):
            gjj = diag[j]
            if gjj <= 0.0:
                coef[j] = 0.0
                continue
            z = c[j] + gjj * coef[j]
            az = abs(z) - pen[j]
            if az > 0.0:
                new = (az if z > 0.0 else -az) / gjj
            else:
                new = 0.0
            delta = new - coef[j]
            if delta != 0.0:
                changed = True
                coef[j] = new
                for l in range(m):
                    c[l] -= G[l, j] * delta
        sweeps += 1
        stalled = not changed
        kkt = _lasso_kkt(c, pen, coef, diag)
    return sweeps, kkt, stalled


@njit(cache=True)
def _garrote_kkt(c, pen, coef, diag):
    worst = 0.0
    for k in range(coef.shape[0]):
        if diag[k] <= 0.0:
            continue
        g = c[k] - pen[k]
        if coef[k] > 0.0:
            v = abs(g)
        else:
            v = g
        if v > worst:
            worst = v
    return worst


@njit(cache=True)
def _garrote_cd(G, c, pen, coef, diag, tol, max_sweeps):
    m = coef.shape[0]
    sweeps = 0
    stalled = False
    kkt = _garrote_kkt(c, pen, coef, diag)
    while kkt > tol and sweeps < max_sweeps and not stalled:
        changed = False
        for k in range(m):
            gkk = diag[k]
            if gkk <= 0.0:
                coef[k] = 0.0
                continue
            z = c[k] + gkk * coef[k] - pen[k]
            new = z / gkk if z > 0.0 else 0.0
            delta = new - coef[k]
            if delta != 0.0:
                changed = True
                coef[k] = new
                for l in range(m):
                    c[l] -= G[l, k] * delta
        sweeps += 1
        stalled = not changed
        kkt = _garrote_kkt(c, pen, coef, diag)
    return sweeps, kkt, stalled


def _run_gram_cd(kernel, kkt_fn, G, xty, pen, coef, tol, max_iter):
    """Drive a CD kernel with fresh-gradient verification of convergence."""
    diag = np.ascontiguousarray(np.diag(G))
    remaining = int(max_iter)
    coef[diag <= 0.0] = 0.0
    while True:
        c = xty - G @ coef
        sweeps, _, stalled = kernel(G, c, pen, coef, diag, tol, remaining)
        remaining -= max(sweeps, 1)
        kkt = kkt_fn(xty - G @ coef, pen, coef, diag)
        if kkt <= tol:
            return kkt
        if stalled:
            raise ConvergenceError(
                f"stalled at float precision (KKT residual {kkt:.3e} > tol {tol:.3e})",
                coef.copy(),
            )
        if remaining <= 0:
            raise ConvergenceError(
                f"max iterations exceeded (KKT residual {kkt:.3e} > tol {tol:.3e})",
                coef.copy(),
            )


def solve_lasso_gram(G, xty, penalty, init=None, tol=1e-8, max_iter=10_000):
    """Gram-form weighted lasso solve; shared by the public solver and the
    alternating engine (which rescales a precomputed Gram matrix)."""
    m = xty.shape[0]
    coef = np.zeros(m) if init is None else np.array(init, dtype=np.float64)
    _run_gram_cd(_lasso_cd, _lasso_kkt, G, xty, penalty, coef, tol, max_iter)
    return coef


def solve_garrote_gram(G, xty, penalty, init=None, tol=1e-8, max_iter=10_000):
    """Gram-form non-negative garrote solve. Output is exactly >= 0."""
    m = xty.shape[0]
    coef = np.zeros(m) if init is None else np.array(init, dtype=np.float64)
    if (coef < 0).any():
        raise ValueError("garrote warm start must be non-negative")
    _run_gram_cd(_garrote_cd, _garrote_kkt, G, xty, penalty, coef, tol, max_iter)
    return coef


def solve_weighted_lasso(
    p: LassoSubproblem, tol: float = 1e-8, max_iter: int = 10_000
) -> np.ndarray:
    """Maximize -1/2||y - Xa||^2 - sum penalty_j |a_j| by coordinate descent.

    The result satisfies the subgradient KKT conditions within ``tol``:
    |x_j'r| <= penalty_j + tol where a_j = 0 and x_j'r = penalty_j sgn(a_j)
    within ``tol`` elsewhere, with r = y - Xa. Raises
    :class:`ConvergenceError` (carrying the last iterate) after
    ``max_iter`` sweeps.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    G = p.X.T @ p.X
    xty = p.X.T @ p.y
    return solve_lasso_gram(G, xty, p.penalty, init=p.init, tol=tol, max_iter=max_iter)


def solve_nonneg_garrote(
    p: GarroteSubproblem, tol: float = 1e-8, max_iter: int = 10_000
) -> np.ndarray:
    """Maximize -1/2||y - Xt d||^2 - sum penalty_k d_k over d >= 0.

    KKT at the output (r = y - Xt d): xt_k'r - penalty_k <= tol for every k,
    with equality within ``tol`` where d_k > 0. Entries are exactly
    non-negative.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    G = p.Xtilde.T @ p.Xtilde
    xty = p.Xtilde.T @ p.y
    return solve_garrote_gram(
        G, xty, p.penalty, init=p.init, tol=tol, max_iter=max_iter
    )


def kkt_residual(
    problem: LassoSubproblem | GarroteSubproblem, solution: np.ndarray
) -> float:
    """Largest KKT violation of ``solution``; 0 iff exactly stationary.

    For the garrote, a negative entry contributes its magnitude as an
    (infeasibility) violation.
    """
    solution = np.asarray(solution, dtype=np.float64).ravel()
    if isinstance(problem, LassoSubproblem):
        if solution.shape[0] != problem.X.shape[1]:
            raise ValueError("solution length does not match problem")
        r = problem.y - problem.X @ solution
        c = problem.X.T @ r
        worst = 0.0
        for j in range(solution.shape[0]):
            if solution[j] == 0.0:
                worst = max(worst, abs(c[j]) - problem.penalty[j])
            else:
                worst = max(
                    worst, abs(c[j] - problem.penalty[j] * np.sign(solution[j]))
                )
        return max(worst, 0.0)
    if isinstance(problem, GarroteSubproblem):
        if solution.shape[0] != problem.Xtilde.shape[1]:
            raise ValueError("solution length does not match problem")
        r = problem.y - problem.Xtilde @ solution
        c = problem.Xtilde.T @ r
        worst = 0.0
        for k in range(solution.shape[0]):
            if solution[k] < 0.0:
                worst = max(worst, -solution[k])
            g = c[k] - problem.penalty[k]
            worst = max(worst, abs(g) if solution[k] > 0.0 else g)
        return max(worst, 0.0)
    raise TypeError(f"unsupported problem type {type(problem).__name__}")
