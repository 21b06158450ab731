"""Logistic hierarchical lasso with possibly overlapping groups.

The criterion is

    max_{d >= 0, a}  sum_i ll(b0 + sum_k d_k sum_{j in G_k} a_j x_ij, y_i)
                     - sum_k d_k - lam * sum_j w_j |a_j|,

with ll(eta, y) = y*eta - log(1 + exp(eta)) and an unpenalized intercept.
Each a_j is the intrinsic effect of variable j, shared across every group
containing it, so a variable in several groups is penalized exactly once.

Each half-step (a with d fixed, d with a fixed) is solved by iteratively
reweighted least squares on top of the quadratic solvers, with the
intercept profiled out of every weighted subproblem and a step-halving
acceptance test on the true penalized log-likelihood, which makes the
outer objective trace non-decreasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import FitOptions, PenaltySpec, fit_hlasso, objective_beta
from .groups import GroupStructure
from .preprocessing import StandardizedDataset
from .solvers import (
    GarroteSubproblem,
    LassoSubproblem,
    solve_nonneg_garrote,
    solve_weighted_lasso,
)

__all__ = [
    "LogisticHLassoFit",
    "LrtError",
    "logistic_loglik",
    "loglik_gradient",
    "fit_logistic_hlasso",
    "predict_proba",
    "lrt_statistic",
]

_WORKING_WEIGHT_FLOOR = 1e-6
_SEPARATION_ETA = 30.0


def logistic_loglik(eta: np.ndarray, y: np.ndarray) -> float:
    """sum_i [y_i eta_i - log(1 + exp(eta_i))], overflow-safe."""
    eta = np.asarray(eta, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    # log(1+e^eta) = max(eta, 0) + log1p(exp(-|eta|))
    return float(np.sum(y * eta - (np.maximum(eta, 0.0) + np.log1p(np.exp(-np.abs(eta))))))


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _memberships(groups: GroupStructure):
    members = groups.member_arrays()
    counts = np.zeros((groups.n_vars, groups.n_groups))
    for k, mem in enumerate(members):
        counts[mem, k] = 1.0
    return members, counts  # counts: P x K incidence matrix


def loglik_gradient(
    X: np.ndarray,
    y: np.ndarray,
    groups: GroupStructure,
    intercept: float,
    alpha: np.ndarray,
    d: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Gradient of the unpenalized log-likelihood in (intercept, alpha, d)."""
    members, incidence = _memberships(groups)
    s = incidence @ d
    eta = intercept + X @ (alpha * s)
    resid = y - _sigmoid(eta)
    g0 = float(resid.sum())
    g_alpha = s * (X.T @ resid)
    U = np.column_stack([X[:, mem] @ alpha[mem] for mem in members])
    g_d = U.T @ resid
    return g0, g_alpha, g_d


@dataclass
class LogisticHLassoFit:
    """Fitted group multipliers, intrinsic effects, and training predictor."""

    d: np.ndarray
    alpha: np.ndarray
    intercept: float
    linear_predictor: np.ndarray
    lam: float
    weights: np.ndarray
    loglik: float
    objective_trace: np.ndarray
    iterations: int
    converged: bool
    diagnostic: str = ""

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1])

    def expanded_coef(self, groups: GroupStructure) -> np.ndarray:
        """Per-variable coefficient a_j * sum_{k: j in G_k} d_k."""
        _, incidence = _memberships(groups)
        return self.alpha * (incidence @ self.d)


def _half_step(
    solve,
    problem_cls,
    M: np.ndarray,
    y: np.ndarray,
    intercept: float,
    coef: np.ndarray,
    penalty: np.ndarray,
    objective,
    irls_tol: float,
    inner_tol: float,
    inner_max_iter: int,
    max_irls: int = 100,
):
    """One IRLS block update of (intercept, coef) for design M.

    ``objective(intercept, coef)`` is the exact penalized criterion for
    this block; candidate IRLS points are accepted through step-halving
    against it, so the block objective never decreases.
    """
    q_cur = objective(intercept, coef)
    for _ in range(max_irls):
        eta = intercept + M @ coef
        p = _sigmoid(eta)
        W = np.maximum(p * (1.0 - p), _WORKING_WEIGHT_FLOOR)
        z = eta + (y - p) / W
        sw = np.sqrt(W)
        wsum = W.sum()
        m_means = (W @ M) / wsum
        z_mean = (W @ z) / wsum
        Mw = sw[:, None] * (M - m_means)
        zw = sw * (z - z_mean)
        prob = problem_cls(Mw, zw, penalty, init=coef.copy())
        cand = solve(prob, tol=inner_tol, max_iter=inner_max_iter)
        cand_b0 = z_mean - float(m_means @ cand)

        t = 1.0
        accepted = False
        for _ in range(30):
            trial_coef = coef + t * (cand - coef)
            trial_b0 = intercept + t * (cand_b0 - intercept)
            q_trial = objective(trial_b0, trial_coef)
            if q_trial > q_cur or (q_trial == q_cur and t == 1.0):
                accepted = q_trial > q_cur
                break
            t *= 0.5
        if not accepted:
            break
        delta = max(
            float(np.max(np.abs(trial_coef - coef))), abs(trial_b0 - intercept)
        )
        coef, intercept, q_cur = trial_coef, trial_b0, q_trial
        if delta <= irls_tol:
            break
    return intercept, coef


def _split_root(r, m):
    """Minimize d + sum_i m_i/(r_i + d) over d >= 0 (all m_i > 0, r_i >= 0).

    The derivative 1 - sum m_i/(r_i+d)^2 is increasing, so the minimizer is
    the unique root, found by bisection; it is 0 iff the derivative at 0 is
    already non-negative (only possible when every r_i > 0)."""
    if (r > 0).all() and float(np.sum(m / r**2)) <= 1.0:
        return 0.0
    lo, hi = 0.0, float(np.sqrt(np.sum(m)))  # slope at hi is >= 0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if float(np.sum(m / (r + mid) ** 2)) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _rebalance_factorization(d, alpha, incidence, members, lam, w, overlapping):
    """Move (d, alpha) to the penalty-minimizing reparameterization of the
    current linear predictor (the expanded coefficients c_j = alpha_j s_j
    are held fixed, so the fitted probabilities do not change).

    Given c, the penalty sum_k d_k + lam sum_j w_j |c_j| / s_j is convex in
    d on the feasible orthant; for disjoint groups the minimizer is the
    closed form d_k = sqrt(lam * sum_j w_j |c_j|), for overlapping groups a
    short block coordinate descent with exact 1-d solves. Ascent move."""
    coef = alpha * (incidence @ d)
    m = lam * w * np.abs(coef)
    if not overlapping:
        d_new = np.zeros_like(d)
        alpha_new = np.zeros_like(alpha)
        for k, mem in enumerate(members):
            t = float(m[mem].sum())
            if t > 0.0:
                d_new[k] = np.sqrt(t)
                alpha_new[mem] = coef[mem] / d_new[k]
        return d_new, alpha_new

    d_new = d.copy()
    for _ in range(100):
        biggest = 0.0
        s = incidence @ d_new
        for k, mem in enumerate(members):
            active = m[mem] > 0.0
            if not active.any():
                new = 0.0
            else:
                r = s[mem][active] - d_new[k]
                new = _split_root(np.maximum(r, 0.0), m[mem][active])
            delta = new - d_new[k]
            if delta != 0.0:
                s[mem] += delta
                biggest = max(biggest, abs(delta))
                d_new[k] = new
        if biggest <= 1e-12 * (1.0 + float(d_new.max())):
            break
    s = incidence @ d_new
    alpha_new = np.zeros_like(alpha)
    nz = np.abs(coef) > 0.0
    alpha_new[nz] = coef[nz] / s[nz]
    return d_new, alpha_new


def fit_logistic_hlasso(
    ds: StandardizedDataset,
    groups: GroupStructure,
    pen: PenaltySpec,
    opts: FitOptions | None = None,
) -> LogisticHLassoFit:
    """Alternating fit of the logistic hierarchical lasso (overlap allowed).

    With d fixed the a-subproblem is an L1-penalized logistic regression on
    columns scaled by s_j = sum of the d_k over groups containing j; with a
    fixed the d-subproblem is a non-negatively constrained, linearly
    penalized logistic regression on group pseudo-covariates. Both are
    solved by IRLS reusing the quadratic solvers.
    """
    opts = opts or FitOptions()
    if ds.response_mode != "binary":
        raise ValueError("binary response mode required")
    if groups.n_vars != ds.n_vars:
        raise ValueError("group structure and dataset disagree on variable count")
    lam = float(pen.lam)
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if pen.weights is None and pen.recipe != "unit":
        raise ValueError(
            "power weight recipes need a pilot linear model; pass explicit "
            "weights for the binary response mode"
        )
    w = pen.resolve_weights(ds)

    X, y = ds.X, ds.y
    members, incidence = _memberships(groups)
    K, P = groups.n_groups, groups.n_vars
    pen_alpha = lam * w
    pen_d = np.ones(K)

    ybar = min(max(ds.y_mean, 1e-10), 1 - 1e-10)
    intercept = float(np.log(ybar / (1.0 - ybar)))
    if opts.init_mode == "supplied":
        if opts.init_d is None or opts.init_alpha is None:
            raise ValueError("supplied init requires init_d and init_alpha")
        d = np.asarray(opts.init_d, dtype=np.float64).copy()
        alpha = np.asarray(opts.init_alpha, dtype=np.float64).copy()
        if opts.init_intercept is not None:
            intercept = float(opts.init_intercept)
    else:
        alpha = np.zeros(P)
        d = np.ones(K)
    coef_prev = alpha * (incidence @ d)
    b0_prev = intercept

    trace: list[float] = []
    converged = False
    diagnostic = ""
    iters = 0

    def full_objective(b0, a, dd):
        eta = b0 + X @ (a * (incidence @ dd))
        return logistic_loglik(eta, y) - float(pen_d @ dd) - float(
            pen_alpha @ np.abs(a)
        )

    for m in range(1, opts.max_outer_iter + 1):
        iters = m
        s = incidence @ d
        Xs = X * s

        def alpha_objective(b0, a, _d=d):
            eta = b0 + Xs @ a
            return logistic_loglik(eta, y) - float(pen_alpha @ np.abs(a))

        intercept, alpha = _half_step(
            solve_weighted_lasso, LassoSubproblem, Xs, y, intercept, alpha,
            pen_alpha, alpha_objective, irls_tol=1e-7,
            inner_tol=opts.inner_tol, inner_max_iter=opts.inner_max_iter,
        )
        alpha[s == 0.0] = 0.0
        if lam > 0:
            # move to the balanced scale before the d step so the garrote's
            # unit penalty carries its beta-space weight, not the init scale
            d, alpha = _rebalance_factorization(
                d, alpha, incidence, members, lam, w, groups.overlapping
            )

        U = np.column_stack([X[:, mem] @ alpha[mem] for mem in members])

        def d_objective(b0, dd):
            eta = b0 + U @ dd
            return logistic_loglik(eta, y) - float(pen_d @ dd)

        intercept, d = _half_step(
            solve_nonneg_garrote, GarroteSubproblem, U, y, intercept, d,
            pen_d, d_objective, irls_tol=1e-7,
            inner_tol=opts.inner_tol, inner_max_iter=opts.inner_max_iter,
        )
        if lam > 0:
            d, alpha = _rebalance_factorization(
                d, alpha, incidence, members, lam, w, groups.overlapping
            )

        trace.append(full_objective(intercept, alpha, d))
        coef = alpha * (incidence @ d)
        eta = intercept + X @ coef
        ll = logistic_loglik(eta, y)
        if np.max(np.abs(eta)) > _SEPARATION_ETA and ll > -1e-6 * ds.n:
            diagnostic = (
                "possible separation: |eta| exceeds "
                f"{_SEPARATION_ETA} with log-likelihood ~ 0"
            )
            break
        delta = max(float(np.max(np.abs(coef - coef_prev))), abs(intercept - b0_prev))
        coef_prev, b0_prev = coef, intercept
        if delta <= opts.tol:
            converged = True
            break
    if not converged and not diagnostic:
        diagnostic = f"no convergence in {opts.max_outer_iter} outer iterations"

    coef = alpha * (incidence @ d)
    eta = intercept + X @ coef
    return LogisticHLassoFit(
        d=d,
        alpha=alpha,
        intercept=float(intercept),
        linear_predictor=eta,
        lam=lam,
        weights=w,
        loglik=logistic_loglik(eta, y),
        objective_trace=np.array(trace),
        iterations=iters,
        converged=converged,
        diagnostic=diagnostic,
    )


def predict_proba(
    fit: LogisticHLassoFit, X_new: np.ndarray, groups: GroupStructure
) -> np.ndarray:
    """Per-row P(y=1) from the fit's standardized-scale coefficients."""
    X_new = np.asarray(X_new, dtype=np.float64)
    if X_new.ndim != 2 or X_new.shape[1] != groups.n_vars:
        raise ValueError(
            f"expected {groups.n_vars} columns, got {X_new.shape}"
        )
    eta = fit.intercept + X_new @ fit.expanded_coef(groups)
    return _sigmoid(eta)


class LrtError(RuntimeError):
    """An LRT optimization failed; carries the partial fits."""

    def __init__(self, message, full_fit=None, null_fit=None):
        super().__init__(message)
        self.full_fit = full_fit
        self.null_fit = null_fit


def _subset_dataset(ds: StandardizedDataset, keep: list[int]) -> StandardizedDataset:
    return StandardizedDataset(
        X=ds.X[:, keep],
        y=ds.y,
        column_means=ds.column_means[keep],
        column_norms=ds.column_norms[keep],
        y_mean=ds.y_mean,
        n=ds.n,
        response_mode=ds.response_mode,
    )


def _penalized_value_binary(fit: LogisticHLassoFit, lam, w) -> float:
    return fit.loglik - float(fit.d.sum()) - lam * float(w @ np.abs(fit.alpha))


def lrt_statistic(
    ds: StandardizedDataset,
    groups: GroupStructure,
    pen: PenaltySpec,
    full_support: list[int] | None,
    null_zero_set: list[int],
    opts: FitOptions | None = None,
) -> float:
    """Likelihood ratio statistic for pinning coordinates to zero.

    T = 2 [ sup Q (model on full_support) - sup Q (null coordinates removed) ],
    both suprema computed by the penalized fitter at the same lambda and
    weights. If the unrestricted optimum comes out below the restricted one
    (a local-maximum artifact), the unrestricted fit is re-run warm-started
    from the embedded null solution, which restores T >= 0 up to float
    noise; the result is clipped to 0. For a Gaussian response the
    criterion difference is scaled by the noise variance estimated from the
    unrestricted fit.
    """
    opts = opts or FitOptions()
    full = sorted(set(range(ds.n_vars) if full_support is None else map(int, full_support)))
    null = sorted(set(int(j) for j in null_zero_set))
    if not null:
        raise ValueError("null_zero_set must be non-empty")
    if not set(null) <= set(full):
        raise ValueError("null_zero_set must be a subset of full_support")
    keep_null = [j for j in full if j not in null]
    if not keep_null:
        raise ValueError("null model would be empty")

    w_all = pen.resolve_weights(ds)
    lam = float(pen.lam)
    ds_full = _subset_dataset(ds, full)
    ds_null = _subset_dataset(ds, keep_null)
    g_full = groups.subset(full)
    g_null = groups.subset(keep_null)
    pen_full = PenaltySpec(lam=lam, weights=w_all[full])
    pen_null = PenaltySpec(lam=lam, weights=w_all[keep_null])

    if ds.response_mode == "binary":
        fitter = fit_logistic_hlasso
        opts_null = opts_full = opts

        def value(fit, dset, grp, pspec):
            return _penalized_value_binary(fit, lam, pspec.weights)
    else:
        fitter = fit_hlasso
        # start at the balanced factorization of the OLS pilot: the default
        # d=1 init crawls toward the right scale when lam is small
        opts_null = _balanced_init_opts(ds_null, g_null, lam, pen_null.weights, opts)
        opts_full = _balanced_init_opts(ds_full, g_full, lam, pen_full.weights, opts)

        def value(fit, dset, grp, pspec):
            return objective_beta(fit.beta, dset, grp, pspec)

    fit_null = fitter(ds_null, g_null, pen_null, opts_null)
    fit_full = fitter(ds_full, g_full, pen_full, opts_full)
    if not fit_null.converged:
        raise LrtError("null-model optimization did not converge",
                       full_fit=fit_full, null_fit=fit_null)
    if not fit_full.converged:
        raise LrtError("full-model optimization did not converge",
                       full_fit=fit_full, null_fit=fit_null)

    q_full = value(fit_full, ds_full, g_full, pen_full)
    q_null = value(fit_null, ds_null, g_null, pen_null)
    if q_full < q_null:
        refit = _refit_from_null(
            fitter, ds_full, g_full, pen_full, opts, fit_null,
            full, keep_null, groups,
        )
        q_refit = value(refit, ds_full, g_full, pen_full)
        if q_refit > q_full:
            fit_full, q_full = refit, q_refit

    if ds.response_mode == "binary":
        t = 2.0 * (q_full - q_null)
    else:
        rss = float(np.sum((ds_full.y - ds_full.X @ fit_full.beta) ** 2))
        sigma2 = max(rss / ds.n, 1e-12)
        t = 2.0 * (q_full - q_null) / sigma2
    return max(float(t), 0.0)


def _balanced_init_opts(ds, groups, lam, w, opts):
    from dataclasses import replace

    from .engine import _pilot_alpha, recover_d_alpha

    if lam <= 0:
        return opts
    pilot = _pilot_alpha(ds, "auto")
    d0, a0 = recover_d_alpha(pilot, groups, lam, weights=w)
    for k, mem in enumerate(groups.member_arrays()):
        if d0[k] == 0.0:
            d0[k] = 1.0
    return replace(opts, init_mode="supplied", init_d=d0, init_alpha=a0)


def _refit_from_null(fitter, ds_full, g_full, pen_full, opts, fit_null,
                     full, keep_null, groups):
    """Warm-start the unrestricted fit from the null solution embedded with
    zeros on the pinned coordinates.

    The embedded point has exactly the null objective value (zeros on the
    extra coordinates, dead groups stay at d=0), so ascending from it
    guarantees sup Q_full >= sup Q_null.
    """
    from dataclasses import replace

    pos_in_full = {j: i for i, j in enumerate(full)}
    alpha0 = np.zeros(len(full))
    for i, j in enumerate(keep_null):
        alpha0[pos_in_full[j]] = fit_null.alpha[i]
    # original group indices surviving each restriction, in order
    keep_full_set, keep_null_set = set(full), set(keep_null)
    surv_full = [k for k, g in enumerate(groups.groups)
                 if any(j in keep_full_set for j in g)]
    surv_null = [k for k, g in enumerate(groups.groups)
                 if any(j in keep_null_set for j in g)]
    d0 = np.zeros(g_full.n_groups)
    full_pos = {k: i for i, k in enumerate(surv_full)}
    for i, k in enumerate(surv_null):
        d0[full_pos[k]] = fit_null.d[i]
    warm = replace(
        opts, init_mode="supplied", init_d=d0, init_alpha=alpha0,
        init_intercept=getattr(fit_null, "intercept", None),
    )
    return fitter(ds_full, g_full, pen_full, warm)
