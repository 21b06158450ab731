"""Alternating hierarchical-lasso engine for disjoint groups.

The criterion, in its single-tuning-parameter form, is

    max_{d >= 0, a}  -1/2 ||y - sum_k d_k sum_j a_kj x_kj||^2
                     - sum_k d_k - lam * sum_kj w_kj |a_kj|,

fit by alternating a weighted-lasso step in ``a`` and a non-negative
garrote step in ``d``. Every criterion here is a maximization, and each
half-step warm-starts from the current iterate, so the objective trace is
non-decreasing by construction.

In terms of beta_kj = d_k a_kj the same criterion reads

    -1/2 ||y - X beta||^2 - 2 sqrt(lam) * sum_k sqrt(sum_j w_kj |beta_kj|),

and at any local maximum the two parameterizations are linked by
d_k = sqrt(lam * sum_j w_kj |beta_kj|). The engine enforces that balance
exactly on the returned iterate: rebalancing (d, a) at fixed beta can only
lower the penalty, so it is an ascent move.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .groups import GroupStructure
from .preprocessing import StandardizedDataset, destandardize
from .solvers import ConvergenceError, solve_garrote_gram, solve_lasso_gram

__all__ = [
    "PenaltySpec",
    "FitOptions",
    "HLassoFit",
    "TwoPenaltyReport",
    "adaptive_weights",
    "objective_beta",
    "recover_d_alpha",
    "lambda_grid",
    "fit_hlasso",
    "fit_hlasso_orthogonal",
    "fit_path",
    "check_two_penalty_equivalence",
]


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty level plus per-variable weights (all 1.0 = plain HLasso).

    ``weights`` may be given directly; otherwise ``recipe`` constructs them
    from a pilot fit: ``"unit"`` (ones), ``"ols_power"``
    (w = 1/|beta_ols|^gamma) or ``"ridge_power"``
    (w = 1/|beta_ridge|^gamma with the given ridge penalty).
    """

    lam: float
    weights: np.ndarray | None = None
    recipe: str = "unit"
    gamma: float = 1.0
    ridge_penalty: float = 1.0
    weight_floor: float = 1e-8

    def __post_init__(self):
        if np.any(np.asarray(self.lam) < 0):
            raise ValueError("lambda must be non-negative")
        if self.recipe not in ("unit", "ols_power", "ridge_power"):
            raise ValueError(f"unknown weight recipe {self.recipe!r}")
        if self.recipe != "unit" and self.gamma <= 0:
            raise ValueError("gamma must be positive for power recipes")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64).ravel()
            if (w <= 0).any() or not np.isfinite(w).all():
                raise ValueError("weights must be positive and finite")
            object.__setattr__(self, "weights", w)

    def resolve_weights(self, ds: StandardizedDataset) -> np.ndarray:
        if self.weights is not None:
            if self.weights.shape != (ds.n_vars,):
                raise ValueError("weights length does not match variable count")
            return self.weights
        if self.recipe == "unit":
            return np.ones(ds.n_vars)
        if self.recipe == "ols_power":
            pilot = np.linalg.lstsq(ds.X, ds.y, rcond=None)[0]
        else:
            G = ds.X.T @ ds.X
            pilot = np.linalg.solve(
                G + self.ridge_penalty * np.eye(ds.n_vars), ds.X.T @ ds.y
            )
        return adaptive_weights(pilot, self.gamma, floor=self.weight_floor)


@dataclass
class FitOptions:
    """Outer-loop controls; inner tolerances are forwarded to the solvers."""

    tol: float = 1e-7
    max_outer_iter: int = 500
    init_mode: str = "auto"  # auto | ols | marginal | supplied
    init_d: np.ndarray | None = None
    init_alpha: np.ndarray | None = None
    init_intercept: float | None = None  # binary-mode fits only
    inner_tol: float = 1e-10
    inner_max_iter: int = 10_000
    record_iterates: bool = False

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_outer_iter < 1:
            raise ValueError("max_outer_iter must be at least 1")
        if self.init_mode not in ("auto", "ols", "marginal", "supplied"):
            raise ValueError(f"unknown init_mode {self.init_mode!r}")


@dataclass
class HLassoFit:
    """Converged (d, alpha, beta) triple with trace and scale bookkeeping.

    ``beta`` lives on the standardized scale; ``beta_original`` and
    ``intercept`` are the same prediction function on the raw data scale.
    """

    d: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    beta_original: np.ndarray
    intercept: float
    lam: float
    weights: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    converged: bool
    # one (d_input, alpha_update, d_update) triple per outer iteration,
    # recorded only when FitOptions.record_iterates is set
    iterates: list[tuple[np.ndarray, np.ndarray, np.ndarray]] | None = None

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1])

    @property
    def active_groups(self) -> np.ndarray:
        return np.flatnonzero(self.d > 0)

    @property
    def n_active_vars(self) -> int:
        return int(np.count_nonzero(self.beta))

    def predict(self, X_raw: np.ndarray) -> np.ndarray:
        X_raw = np.asarray(X_raw, dtype=np.float64)
        return self.intercept + X_raw @ self.beta_original


def adaptive_weights(
    beta_pilot: np.ndarray, gamma: float, floor: float = 1e-8
) -> np.ndarray:
    """w_j = 1 / max(|pilot_j|, floor)^gamma; always finite and positive."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if floor <= 0:
        raise ValueError("floor must be positive")
    pilot = np.asarray(beta_pilot, dtype=np.float64)
    return 1.0 / np.maximum(np.abs(pilot), floor) ** gamma


def objective_beta(
    beta: np.ndarray,
    ds: StandardizedDataset,
    groups: GroupStructure,
    pen: PenaltySpec,
) -> float:
    """Criterion value -1/2 RSS - 2 sqrt(lam) sum_k sqrt(sum_j w_kj|beta_kj|)."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (ds.n_vars,):
        raise ValueError("beta length does not match dataset")
    if groups.overlapping:
        raise ValueError("beta-space objective requires disjoint groups")
    w = pen.resolve_weights(ds)
    r = ds.y - ds.X @ beta
    penalty = 0.0
    for members in groups.member_arrays():
        penalty += np.sqrt(np.sum(w[members] * np.abs(beta[members])))
    return float(-0.5 * (r @ r) - 2.0 * np.sqrt(pen.lam) * penalty)


def recover_d_alpha(
    beta: np.ndarray,
    groups: GroupStructure,
    lam: float,
    weights: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Balanced factorization d_k = sqrt(lam * sum_j w_kj|beta_kj|), a = beta/d.

    Groups with beta_k = 0 get d_k = 0 and alpha_k = 0. Requires lam > 0;
    the factorization degenerates at lam = 0.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive to recover (d, alpha)")
    if groups.overlapping:
        raise ValueError("recovery requires disjoint groups")
    beta = np.asarray(beta, dtype=np.float64)
    w = np.ones_like(beta) if weights is None else np.asarray(weights, dtype=np.float64)
    d = np.zeros(groups.n_groups)
    alpha = np.zeros_like(beta)
    for k, members in enumerate(groups.member_arrays()):
        t = float(np.sum(w[members] * np.abs(beta[members])))
        if t > 0.0:
            d[k] = np.sqrt(lam * t)
            alpha[members] = beta[members] / d[k]
    return d, alpha


def lambda_grid(
    ds: StandardizedDataset,
    groups: GroupStructure | None = None,
    weights: np.ndarray | None = None,
    n_points: int = 50,
    min_ratio: float = 1e-4,
) -> np.ndarray:
    """Descending log-spaced grid from (max_j |x_j'y| / w_j)^2 downwards.

    From the standard initialization (d=1), the first variable-level update
    kills everything once lam >= max_j |x_j'y| / w_j; the squared top value
    is a comfortable margin above that on standardized data. Exactness is
    not needed for tuning. ``groups`` is accepted for interface symmetry.
    """
    w = np.ones(ds.n_vars) if weights is None else np.asarray(weights, dtype=np.float64)
    top = float(np.max(np.abs(ds.X.T @ ds.y) / w))
    lam_max = max(top, 1.0) ** 2
    return np.geomspace(lam_max, lam_max * min_ratio, n_points)


# --- core alternation -------------------------------------------------------


def _pilot_alpha(ds: StandardizedDataset, mode: str) -> np.ndarray:
    if mode == "auto":
        mode = "ols" if ds.n > ds.n_vars else "marginal"
    if mode == "ols":
        return np.linalg.lstsq(ds.X, ds.y, rcond=None)[0]
    if mode == "marginal":
        # columns have unit norm, so the simple-regression slope is x_j'y
        return ds.X.T @ ds.y
    raise ValueError(f"unknown init mode {mode!r}")


def _indicator(groups: GroupStructure) -> tuple[np.ndarray, np.ndarray]:
    var_group = groups.group_of()
    E = np.zeros((groups.n_vars, groups.n_groups))
    E[np.arange(groups.n_vars), var_group] = 1.0
    return var_group, E


def _objective_dalpha(d, alpha, var_group, G, xty, yty, pen_alpha, pen_d):
    beta = d[var_group] * alpha
    rss = yty - 2.0 * (beta @ xty) + beta @ (G @ beta)
    return float(-0.5 * rss - pen_d @ d - pen_alpha @ np.abs(alpha))


def _rebalance(d, alpha, var_group, members, lam_alpha, w, pen_d):
    """Per-group rescaling to the penalty-minimizing factorization of the
    current beta: d_k = sqrt(lam_alpha * sum w|beta| / pen_d_k). Leaves beta
    unchanged and never decreases the objective."""
    beta = d[var_group] * alpha
    d_new = np.zeros_like(d)
    alpha_new = np.zeros_like(alpha)
    for k, mem in enumerate(members):
        t = lam_alpha * float(np.sum(w[mem] * np.abs(beta[mem])))
        if t > 0.0:
            d_new[k] = np.sqrt(t / pen_d[k])
            alpha_new[mem] = beta[mem] / d_new[k]
    return d_new, alpha_new


def _alternate(
    ds: StandardizedDataset,
    groups: GroupStructure,
    pen_alpha: np.ndarray,
    pen_d: np.ndarray,
    d0: np.ndarray,
    alpha0: np.ndarray,
    opts: FitOptions,
    balance_lam_alpha: float,
    balance_weights: np.ndarray | None,
):
    """Run the alternating updates; returns (d, alpha, trace, iters, converged)."""
    X, y = ds.X, ds.y
    G = X.T @ X
    xty = X.T @ y
    yty = float(y @ y)
    var_group, E = _indicator(groups)
    members = groups.member_arrays()

    d = np.asarray(d0, dtype=np.float64).copy()
    alpha = np.asarray(alpha0, dtype=np.float64).copy()
    beta = d[var_group] * alpha
    trace: list[float] = []
    iterates: list[tuple[np.ndarray, np.ndarray, np.ndarray]] | None = (
        [] if opts.record_iterates else None
    )
    converged = False
    iters = 0
    try:
        for m in range(1, opts.max_outer_iter + 1):
            iters = m
            d_in = d.copy()
            s = d[var_group]
            Gs = G * np.outer(s, s)
            alpha = solve_lasso_gram(
                Gs, s * xty, pen_alpha, init=alpha,
                tol=opts.inner_tol, max_iter=opts.inner_max_iter,
            )
            A = alpha[:, None] * E
            Gg = A.T @ (G @ A)
            d = solve_garrote_gram(
                Gg, A.T @ xty, pen_d, init=d,
                tol=opts.inner_tol, max_iter=opts.inner_max_iter,
            )
            if iterates is not None:
                iterates.append((d_in, alpha.copy(), d.copy()))
            beta_new = d[var_group] * alpha
            trace.append(
                _objective_dalpha(d, alpha, var_group, G, xty, yty, pen_alpha, pen_d)
            )
            if np.max(np.abs(beta_new - beta)) <= opts.tol:
                beta = beta_new
                converged = True
                break
            beta = beta_new
    except ConvergenceError:
        converged = False

    if balance_lam_alpha > 0:
        # rescale each group's (d, alpha) to the
        # penalty-minimizing factorization of the returned beta. Pure
        # ascent, beta unchanged; pins the d = sqrt(lam * sum w|beta|)
        # identity on the output exactly.
        d, alpha = _rebalance(
            d, alpha, var_group, members, balance_lam_alpha,
            balance_weights, pen_d,
        )
        trace.append(
            _objective_dalpha(d, alpha, var_group, G, xty, yty, pen_alpha, pen_d)
        )
    return d, alpha, np.array(trace), iters, converged, var_group, iterates


def _build_fit(ds, groups, lam, weights, d, alpha, var_group, trace, iters,
               converged, iterates) -> HLassoFit:
    beta = d[var_group] * alpha
    beta_orig, intercept = destandardize(beta, ds)
    return HLassoFit(
        d=d,
        alpha=alpha,
        beta=beta,
        beta_original=beta_orig,
        intercept=intercept,
        lam=float(lam),
        weights=weights,
        objective_trace=trace,
        iterations=iters,
        converged=converged,
        iterates=iterates,
    )


def _check_fit_inputs(ds, groups, pen):
    if groups.overlapping:
        raise ValueError("the Gaussian engine requires a disjoint group structure")
    if groups.n_vars != ds.n_vars:
        raise ValueError("group structure and dataset disagree on variable count")
    if ds.response_mode != "gaussian":
        raise ValueError("Gaussian response mode required")
    lam = pen.lam
    if np.ndim(lam) != 0:
        raise ValueError("fit_hlasso takes a single lambda; use fit_path for grids")
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    return float(lam)


def _balanced_split(pilot, groups, lam_alpha, w, pen_d):
    """Factor pilot coefficients as (d0, alpha0) with beta0 = pilot and the
    per-group penalty balanced. Used for warm starts (LRT fits) where the
    default d0=1 scale would make the alternation crawl at small lam."""
    d0 = np.ones(len(pen_d))
    alpha0 = pilot.copy()
    for k, mem in enumerate(groups.member_arrays()):
        t = lam_alpha * float(np.sum(w[mem] * np.abs(pilot[mem]))) / pen_d[k]
        if t > 0.0:
            d0[k] = np.sqrt(t)
            alpha0[mem] = pilot[mem] / d0[k]
    return d0, alpha0


def _initial_point(ds, groups, opts):
    """Default initialization: d = 1 and the OLS (n > P) or marginal
    (otherwise) pilot coefficients for alpha."""
    if opts.init_mode == "supplied":
        if opts.init_d is None or opts.init_alpha is None:
            raise ValueError("supplied init requires init_d and init_alpha")
        return (
            np.asarray(opts.init_d, dtype=np.float64),
            np.asarray(opts.init_alpha, dtype=np.float64),
        )
    return np.ones(groups.n_groups), _pilot_alpha(ds, opts.init_mode)


def fit_hlasso(
    ds: StandardizedDataset,
    groups: GroupStructure,
    pen: PenaltySpec,
    opts: FitOptions | None = None,
) -> HLassoFit:
    """Fit the hierarchical lasso at a single lambda by alternating updates.

    Non-convergence within ``max_outer_iter`` returns a fit flagged
    ``converged=False`` rather than raising.
    """
    opts = opts or FitOptions()
    lam = _check_fit_inputs(ds, groups, pen)
    w = pen.resolve_weights(ds)
    if lam == 0.0:
        return _fit_unpenalized(ds, groups, w, opts)
    d0, alpha0 = _initial_point(ds, groups, opts)
    d, alpha, trace, iters, converged, var_group, iterates = _alternate(
        ds, groups, pen_alpha=lam * w, pen_d=np.ones(groups.n_groups),
        d0=d0, alpha0=alpha0, opts=opts,
        balance_lam_alpha=lam, balance_weights=w,
    )
    return _build_fit(ds, groups, lam, w, d, alpha, var_group, trace,
                      iters, converged, iterates)


def _fit_unpenalized(ds, groups, w, opts):
    """lam = 0: the beta-space criterion has no penalty at all, so the fit is
    least squares. The (d, alpha) split is degenerate there (the group
    penalty's infimum over factorizations is not attained), so the reported
    factorization is the convention d = 1, alpha = beta."""
    G = ds.X.T @ ds.X
    xty = ds.X.T @ ds.y
    beta = solve_lasso_gram(
        G, xty, np.zeros(ds.n_vars),
        init=_pilot_alpha(ds, "auto" if opts.init_mode == "supplied" else opts.init_mode),
        tol=opts.inner_tol, max_iter=opts.inner_max_iter,
    )
    rss = float(ds.y @ ds.y) - 2.0 * (beta @ xty) + beta @ (G @ beta)
    trace = np.array([-0.5 * rss - groups.n_groups])
    var_group = groups.group_of()
    return _build_fit(
        ds, groups, 0.0, w, np.ones(groups.n_groups), beta.copy(), var_group,
        trace, 1, True, None,
    )


class OrthogonalityError(ValueError):
    """Design is not orthonormal enough for the closed-form fast path."""


def fit_hlasso_orthogonal(
    ds: StandardizedDataset,
    groups: GroupStructure,
    pen: PenaltySpec,
    opts: FitOptions | None = None,
) -> HLassoFit:
    """Closed-form alternation for orthonormal designs (X'X = I).

    The alpha update is the indicator/sign/positive-part soft threshold with
    shrinkage lam*w/d^2, and the d update is the shrunken weighted average
    of the per-variable ratio estimates; both are checked against the
    generic engine in the test suite.
    """
    opts = opts or FitOptions()
    lam = _check_fit_inputs(ds, groups, pen)
    gram_gap = np.abs(ds.X.T @ ds.X - np.eye(ds.n_vars)).max()
    if gram_gap > 1e-8:
        raise OrthogonalityError(
            f"orthogonality precondition failed: max |X'X - I| entry = {gram_gap:.3e}"
        )
    w = pen.resolve_weights(ds)
    if lam == 0.0:
        return _fit_unpenalized(ds, groups, w, opts)
    var_group, _ = _indicator(groups)
    members = groups.member_arrays()
    bols = ds.X.T @ ds.y
    yty = float(ds.y @ ds.y)

    d0, alpha0 = _initial_point(ds, groups, opts)
    d = d0.copy()
    alpha = alpha0.copy()
    beta = d[var_group] * alpha
    trace: list[float] = []
    iterates: list[tuple[np.ndarray, np.ndarray, np.ndarray]] | None = (
        [] if opts.record_iterates else None
    )
    converged = False
    iters = 0
    ones_k = np.ones(groups.n_groups)
    for m in range(1, opts.max_outer_iter + 1):
        iters = m
        d_in = d.copy()
        s = d[var_group]
        alpha = np.zeros_like(alpha)
        live = s > 0
        alpha[live] = np.sign(bols[live]) * np.maximum(
            np.abs(bols[live]) / s[live] - lam * w[live] / s[live] ** 2, 0.0
        )
        for k, mem in enumerate(members):
            ssq = float(np.sum(alpha[mem] ** 2))
            if ssq > 0.0:
                d[k] = max((float(alpha[mem] @ bols[mem]) - 1.0) / ssq, 0.0)
            else:
                d[k] = 0.0
        if iterates is not None:
            iterates.append((d_in, alpha.copy(), d.copy()))
        beta_new = d[var_group] * alpha
        rss = yty - 2.0 * (beta_new @ bols) + beta_new @ beta_new
        trace.append(
            float(-0.5 * rss - d.sum() - lam * (w @ np.abs(alpha)))
        )
        if np.max(np.abs(beta_new - beta)) <= opts.tol:
            beta = beta_new
            converged = True
            break
        beta = beta_new

    d, alpha = _rebalance(d, alpha, var_group, members, lam, w, ones_k)
    beta = d[var_group] * alpha
    rss = yty - 2.0 * (beta @ bols) + beta @ beta
    trace.append(float(-0.5 * rss - d.sum() - lam * (w @ np.abs(alpha))))
    return _build_fit(ds, groups, lam, w, d, alpha, var_group,
                      np.array(trace), iters, converged, iterates)


def fit_path(
    ds: StandardizedDataset,
    groups: GroupStructure,
    lam_grid: Sequence[float] | np.ndarray,
    weights: np.ndarray | None = None,
    opts: FitOptions | None = None,
) -> list[HLassoFit]:
    """Fit one model per lambda on a strictly descending grid, warm-started.

    Live groups re-enter at the balanced factorization for the new lambda;
    groups that died at the previous lambda are revived at the cold-start
    initialization (d=1, pilot alpha) so the path can resurrect them as the
    penalty loosens.
    """
    opts = opts or FitOptions()
    grid = np.asarray(lam_grid, dtype=np.float64).ravel()
    if grid.size == 0:
        raise ValueError("empty lambda grid")
    if (grid <= 0).any():
        raise ValueError("grid values must be positive")
    if grid.size > 1 and not (np.diff(grid) < 0).all():
        raise ValueError("lambda grid must be strictly descending")
    w = (
        np.ones(ds.n_vars)
        if weights is None
        else np.asarray(weights, dtype=np.float64)
    )
    if opts.init_mode == "supplied":
        if opts.init_alpha is None:
            raise ValueError("supplied init requires init_alpha")
        pilot = np.asarray(opts.init_alpha, dtype=np.float64)
    else:
        pilot = _pilot_alpha(ds, opts.init_mode)
    members = groups.member_arrays()

    fits: list[HLassoFit] = []
    prev: HLassoFit | None = None
    for lam in grid:
        pen = PenaltySpec(lam=float(lam), weights=w)
        if prev is None:
            cur_opts = opts
        else:
            init_d, init_alpha = recover_d_alpha(prev.beta, groups, float(lam), w)
            for k, mem in enumerate(members):
                if init_d[k] == 0.0:
                    # dead groups revive at the cold-start values
                    init_d[k] = 1.0
                    init_alpha[mem] = pilot[mem]
            cur_opts = replace(
                opts, init_mode="supplied", init_d=init_d, init_alpha=init_alpha
            )
        fit = fit_hlasso(ds, groups, pen, cur_opts)
        fits.append(fit)
        prev = fit
    return fits


@dataclass
class TwoPenaltyReport:
    """Agreement diagnostics between the two-penalty criterion (lam1, lam2)
    and the combined criterion at lam = lam1*lam2 from mapped inits."""

    lam1: float
    lam2: float
    max_beta_diff: float
    objective_two_penalty: float
    objective_combined: float
    beta_two_penalty: np.ndarray
    beta_combined: np.ndarray


def check_two_penalty_equivalence(
    ds: StandardizedDataset,
    groups: GroupStructure,
    lam1: float,
    lam2: float,
    opts: FitOptions | None = None,
) -> TwoPenaltyReport:
    """Run the alternation on the (lam1, lam2) criterion and on the combined
    criterion at lam1*lam2, from the same (mapped) initialization.

    The two-penalty iterates (d, a) map to (lam1*d, a/lam1) for the combined
    run, so the fitted beta sequences coincide up to solver tolerance.
    """
    if lam1 <= 0 or lam2 <= 0:
        raise ValueError("lam1 and lam2 must be positive")
    opts = opts or FitOptions()
    if groups.overlapping:
        raise ValueError("disjoint group structure required")
    K = groups.n_groups
    ones = np.ones(ds.n_vars)
    d0, alpha0 = _initial_point(ds, groups, opts)
    base = replace(opts, record_iterates=False)

    d_a, al_a, tr_a, _, _, var_group, _ = _alternate(
        ds, groups,
        pen_alpha=lam2 * ones, pen_d=lam1 * np.ones(K),
        d0=d0, alpha0=alpha0, opts=base,
        balance_lam_alpha=lam2, balance_weights=ones,
    )
    beta_a = d_a[var_group] * al_a

    d_b, al_b, tr_b, _, _, _, _ = _alternate(
        ds, groups,
        pen_alpha=lam1 * lam2 * ones, pen_d=np.ones(K),
        d0=lam1 * d0, alpha0=alpha0 / lam1, opts=base,
        balance_lam_alpha=lam1 * lam2, balance_weights=ones,
    )
    beta_b = d_b[var_group] * al_b

    return TwoPenaltyReport(
        lam1=float(lam1),
        lam2=float(lam2),
        max_beta_diff=float(np.max(np.abs(beta_a - beta_b))),
        objective_two_penalty=float(tr_a[-1]),
        objective_combined=float(tr_b[-1]),
        beta_two_penalty=beta_a,
        beta_combined=beta_b,
    )
