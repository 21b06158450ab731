"""Simulation benchmark harness: grouped polynomial/dummy designs with
SNR-calibrated noise, validation-set and k-fold tuning, and selection and
model-error metrics.

The generator draws seventeen iid standard normals Z_1..Z_16, W and sets
X_j = (Z_j + W)/sqrt(2), giving unit-variance covariates with pairwise
correlation 1/2. The last eight covariates are discretized at the standard
normal quartiles into levels 0..3. Continuous covariates expand through a
fourth-order polynomial (x, x^2, x^3, x^4); categorical ones through the
indicators of levels 0, 1 and 2. That yields 8 groups of 4 plus 8 groups
of 3: 56 expanded columns in 16 groups.

Case 1 activates three whole groups; Case 2 activates only part of
each signal group, so group-level and within-group selection are both
exercised. Noise is calibrated so
Var(x'beta)/Var(eps) = 3.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import norm

from .engine import FitOptions, PenaltySpec, fit_hlasso, fit_path, lambda_grid
from .groups import GroupStructure, build_group_structure
from .logistic import fit_logistic_hlasso, predict_proba
from .preprocessing import destandardize, standardize
from .solvers import solve_lasso_gram

__all__ = [
    "N_CONTINUOUS",
    "N_CATEGORICAL",
    "P_EXPANDED",
    "K_GROUPS",
    "SimDesign",
    "SimReport",
    "expanded_group_structure",
    "column_names",
    "true_beta",
    "gen_covariates",
    "gen_response",
    "calibrate_sigma",
    "run_benchmark",
    "tune_kfold",
]

N_CONTINUOUS = 8
N_CATEGORICAL = 8
POLY_DEGREE = 4
N_INDICATORS = 3
P_EXPANDED = N_CONTINUOUS * POLY_DEGREE + N_CATEGORICAL * N_INDICATORS  # 56
K_GROUPS = N_CONTINUOUS + N_CATEGORICAL

_QUARTILE_CUTS = norm.ppf([0.25, 0.5, 0.75])
_SNR = 3.0


def expanded_group_structure() -> GroupStructure:
    """16 disjoint groups over the 56 expanded columns, continuous first."""
    spec = []
    col = 0
    for j in range(N_CONTINUOUS):
        spec.append((f"X{j + 1}", list(range(col, col + POLY_DEGREE))))
        col += POLY_DEGREE
    for j in range(N_CATEGORICAL):
        spec.append((f"X{j + 9}", list(range(col, col + N_INDICATORS))))
        col += N_INDICATORS
    return build_group_structure(spec, P_EXPANDED)


def column_names() -> list[str]:
    names = []
    for j in range(N_CONTINUOUS):
        names += [f"X{j + 1}^{p}" if p > 1 else f"X{j + 1}" for p in range(1, 5)]
    for j in range(N_CATEGORICAL):
        names += [f"X{j + 9}={lvl}" for lvl in range(N_INDICATORS)]
    return names


def true_beta(case: int) -> np.ndarray:
    """Expanded-basis coefficients of the case's signal; zeros elsewhere."""
    beta = np.zeros(P_EXPANDED)
    if case == 1:
        beta[8:12] = (1.0, 0.5, 0.1, 0.1)      # X3 polynomial block
        beta[20:24] = (1.0, -0.5, 0.15, 0.1)   # X6 polynomial block
        beta[32:35] = (1.0, 1.0, 1.0)          # X9 indicator block
    elif case == 2:
        beta[8:10] = (1.0, 1.0)
        beta[20:22] = (2.0, -1.5)
        beta[32:34] = (1.0, 2.0)
    else:
        raise ValueError("case must be 1 or 2")
    return beta


def gen_covariates(n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Raw 16-column covariates plus the 56-column expanded design."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, 16))
    W = rng.standard_normal((n, 1))
    latent = (Z + W) / np.sqrt(2.0)
    raw = latent.copy()
    raw[:, N_CONTINUOUS:] = np.digitize(latent[:, N_CONTINUOUS:], _QUARTILE_CUTS)

    blocks = []
    for j in range(N_CONTINUOUS):
        x = latent[:, j]
        blocks.append(np.column_stack([x, x**2, x**3, x**4]))
    for j in range(N_CATEGORICAL):
        lv = raw[:, N_CONTINUOUS + j]
        blocks.append(
            np.column_stack([(lv == l).astype(np.float64) for l in range(N_INDICATORS)])
        )
    return raw, np.hstack(blocks)


def gen_response(expanded: np.ndarray, case: int, sigma: float, seed) -> np.ndarray:
    """y = X beta_true(case) + N(0, sigma^2) noise."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = np.random.default_rng(seed)
    signal = expanded @ true_beta(case)
    return signal + sigma * rng.standard_normal(expanded.shape[0])


@functools.lru_cache(maxsize=None)
def calibrate_sigma(case: int, mc_n: int = 1_000_000, seed: int = 20260101) -> float:
    """sigma with Var(x'beta)/sigma^2 = 3, via a Monte Carlo variance estimate."""
    if mc_n < 10_000:
        raise ValueError("mc_n must be at least 10000")
    _, expanded = gen_covariates(mc_n, seed)
    var = float(np.var(expanded @ true_beta(case), ddof=1))
    return float(np.sqrt(var / _SNR))


@dataclass(frozen=True)
class SimDesign:
    """Benchmark configuration; defaults follow the simulation protocol."""

    case: int
    n_train: int = 400
    n_valid: int = 200
    n_test: int = 10_000
    sigma: float | None = None  # None -> SNR-3 calibration
    seed: int = 0

    def __post_init__(self):
        if self.case not in (1, 2):
            raise ValueError("case must be 1 or 2")

    @property
    def true_beta(self) -> np.ndarray:
        return true_beta(self.case)

    def resolve_sigma(self) -> float:
        return float(self.sigma) if self.sigma is not None else calibrate_sigma(self.case)


@dataclass
class SimReport:
    """Per-replication metrics plus their means and standard errors."""

    case: int
    method: str
    seed: int
    reps_requested: int
    rep_ids: list[int] = field(default_factory=list)
    mse: np.ndarray = field(default_factory=lambda: np.empty(0))
    zero_var_pct: np.ndarray = field(default_factory=lambda: np.empty(0))
    nonzero_var_pct: np.ndarray = field(default_factory=lambda: np.empty(0))
    lambda_chosen: np.ndarray = field(default_factory=lambda: np.empty(0))
    supports: np.ndarray = field(default_factory=lambda: np.empty((0, P_EXPANDED), dtype=np.uint8))
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def reps(self) -> int:
        return len(self.rep_ids)

    @staticmethod
    def _se(values: np.ndarray) -> float:
        if values.size < 2:
            return float("nan")
        return float(np.std(values, ddof=1) / np.sqrt(values.size))

    @property
    def mean_mse(self) -> float:
        return float(self.mse.mean())

    @property
    def se_mse(self) -> float:
        return self._se(self.mse)

    @property
    def mean_zero_var_pct(self) -> float:
        return float(self.zero_var_pct.mean())

    @property
    def mean_nonzero_var_pct(self) -> float:
        return float(self.nonzero_var_pct.mean())

    def summary_dict(self) -> dict:
        return {
            "case": self.case,
            "method": self.method,
            "seed": self.seed,
            "reps": self.reps,
            "failed_reps": len(self.failures),
            "mse": self.mean_mse,
            "mse_se": self.se_mse,
            "zero_var_pct": self.mean_zero_var_pct,
            "zero_var_pct_se": self._se(self.zero_var_pct),
            "nonzero_var_pct": self.mean_nonzero_var_pct,
            "nonzero_var_pct_se": self._se(self.nonzero_var_pct),
        }

    def per_rep_rows(self) -> list[dict]:
        rows = []
        for i, rep in enumerate(self.rep_ids):
            rows.append(
                {
                    "rep": rep,
                    "mse": float(self.mse[i]),
                    "zero_var_pct": float(self.zero_var_pct[i]),
                    "nonzero_var_pct": float(self.nonzero_var_pct[i]),
                    "lambda": float(self.lambda_chosen[i]),
                }
            )
        return rows


def _selection_metrics(beta_hat: np.ndarray, beta_true: np.ndarray) -> tuple[float, float]:
    zero_mask = beta_true == 0.0
    zero_pct = 100.0 * float(np.mean(beta_hat[zero_mask] == 0.0))
    nonzero_pct = 100.0 * float(np.mean(beta_hat[~zero_mask] != 0.0))
    return zero_pct, nonzero_pct


def _lasso_path(ds, grid, opts):
    """Plain-lasso fits along a descending grid, warm-started."""
    G = ds.X.T @ ds.X
    xty = ds.X.T @ ds.y
    out = []
    coef = np.zeros(ds.n_vars)
    for lam in grid:
        coef = solve_lasso_gram(
            G, xty, lam * np.ones(ds.n_vars), init=coef,
            tol=opts.inner_tol, max_iter=opts.inner_max_iter,
        )
        out.append(coef.copy())
    return out


def _candidates(method: str, ds, groups, grid, opts):
    """(lambda, beta_std) candidates for validation tuning."""
    if method == "ols":
        beta = np.linalg.lstsq(ds.X, ds.y, rcond=None)[0]
        return [(0.0, beta)]
    if method == "lasso":
        g = grid if grid is not None else _plain_lasso_grid(ds)
        return list(zip(g, _lasso_path(ds, g, opts)))
    if method == "hlasso":
        g = grid if grid is not None else lambda_grid(ds, groups)
        fits = fit_path(ds, groups, g, opts=opts)
        return [(lam, fit.beta) for lam, fit in zip(g, fits)]
    if method == "adaptive_hlasso":
        w = PenaltySpec(lam=0.0, recipe="ols_power", gamma=1.0).resolve_weights(ds)
        if grid is not None:
            g = grid
        else:
            # Adaptive weights spread the per-coordinate null thresholds
            # |x_j'y|/w_j over orders of magnitude, so the unweighted
            # default (squared top) overshoots. The grid brackets the
            # largest threshold by one decade above and two below: the
            # bottom still binds the noisy coordinates, which keeps
            # near-saturated candidates out of the validation tournament.
            lam_null = max(float(np.max(np.abs(ds.X.T @ ds.y) / w)), 1e-12)
            g = np.geomspace(10.0 * lam_null, 0.01 * lam_null, 50)
        fits = fit_path(ds, groups, g, weights=w, opts=opts)
        return [(lam, fit.beta) for lam, fit in zip(g, fits)]
    raise ValueError(f"unknown method {method!r}")


def _plain_lasso_grid(ds, n_points: int = 50, min_ratio: float = 1e-4) -> np.ndarray:
    lam_max = max(float(np.max(np.abs(ds.X.T @ ds.y))), 1e-12)
    return np.geomspace(lam_max, lam_max * min_ratio, n_points)


def _one_rep(design: SimDesign, method: str, sigma: float, grid, rep: int,
             opts: FitOptions) -> dict:
    ss = np.random.SeedSequence(entropy=design.seed, spawn_key=(rep,))
    rng = np.random.default_rng(ss)
    case = design.case
    _, X_tr = gen_covariates(design.n_train, rng)
    y_tr = gen_response(X_tr, case, sigma, rng)
    _, X_va = gen_covariates(design.n_valid, rng)
    y_va = gen_response(X_va, case, sigma, rng)
    _, X_te = gen_covariates(design.n_test, rng)
    signal_te = X_te @ design.true_beta

    ds = standardize(X_tr, y_tr)
    groups = expanded_group_structure()
    cands = _candidates(method, ds, groups, grid, opts)

    best = None
    for lam, beta_std in cands:  # descending grid: ties keep the larger lambda
        beta_orig, intercept = destandardize(beta_std, ds)
        err = float(np.mean((intercept + X_va @ beta_orig - y_va) ** 2))
        if best is None or err < best[0]:
            best = (err, lam, beta_std, beta_orig, intercept)
    _, lam, beta_std, beta_orig, intercept = best

    mse = float(np.mean((intercept + X_te @ beta_orig - signal_te) ** 2))
    zero_pct, nonzero_pct = _selection_metrics(beta_std, design.true_beta)
    return {
        "rep": rep,
        "mse": mse,
        "zero_var_pct": zero_pct,
        "nonzero_var_pct": nonzero_pct,
        "lambda": float(lam),
        "support": (beta_std != 0.0).astype(np.uint8),
    }


def run_benchmark(
    case: int,
    method: str,
    reps: int,
    lambda_grid_values: np.ndarray | None = None,
    seed: int = 0,
    design: SimDesign | None = None,
    opts: FitOptions | None = None,
    n_jobs: int = 1,
) -> SimReport:
    """Replicate the train/validate/test protocol and aggregate the metrics.

    Per replication: generate train/validation/test sets, fit the method
    over its lambda grid on the training set, keep the grid value with the
    lowest validation prediction error, then report on the test set the
    model error mean((x'beta_hat - x'beta_true)^2), the percentage of
    truly-zero coefficients estimated exactly zero, and the percentage of
    truly-nonzero coefficients kept nonzero. Solver failures are recorded
    per replication and excluded from the aggregates.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    if method not in ("hlasso", "adaptive_hlasso", "lasso", "ols"):
        raise ValueError(f"unknown method {method!r}")
    design = design or SimDesign(case=case, seed=seed)
    if design.case != case or design.seed != seed:
        raise ValueError("design disagrees with case/seed arguments")
    opts = opts or FitOptions()
    sigma = design.resolve_sigma()

    def safe(rep):
        try:
            return rep, _one_rep(design, method, sigma, lambda_grid_values, rep, opts), None
        except Exception as exc:  # recorded, rep excluded
            return rep, None, repr(exc)

    if n_jobs == 1:
        results = [safe(rep) for rep in range(reps)]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(safe)(rep) for rep in range(reps))

    report = SimReport(case=case, method=method, seed=seed, reps_requested=reps)
    rows = []
    for rep, row, err in results:
        if err is not None:
            report.failures.append((rep, err))
        else:
            rows.append(row)
    report.rep_ids = [r["rep"] for r in rows]
    report.mse = np.array([r["mse"] for r in rows])
    report.zero_var_pct = np.array([r["zero_var_pct"] for r in rows])
    report.nonzero_var_pct = np.array([r["nonzero_var_pct"] for r in rows])
    report.lambda_chosen = np.array([r["lambda"] for r in rows])
    report.supports = (
        np.vstack([r["support"] for r in rows])
        if rows
        else np.empty((0, P_EXPANDED), dtype=np.uint8)
    )
    return report


# --- k-fold tuning -----------------------------------------------------------


def _make_folds(n: int, k: int, rng: np.random.Generator,
                y: np.ndarray | None) -> list[np.ndarray]:
    """Index folds; stratified by class when a binary y is given."""
    if y is None:
        perm = rng.permutation(n)
        return [perm[i::k] for i in range(k)]
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in (0.0, 1.0):
        idx = rng.permutation(np.flatnonzero(y == cls))
        for i, j in enumerate(idx):
            folds[i % k].append(int(j))
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


def _fold_ok(y, train_idx, test_idx) -> bool:
    return (
        len(np.unique(y[train_idx])) == 2 and len(np.unique(y[test_idx])) == 2
    )


def tune_kfold(
    ds,
    groups: GroupStructure,
    method: str,
    k: int,
    grid: np.ndarray,
    seed: int = 0,
    opts: FitOptions | None = None,
) -> tuple[float, np.ndarray]:
    """Pick lambda by k-fold cross-validation; ties break toward larger lambda.

    Gaussian responses score held-out squared error; binary responses score
    held-out negative log-likelihood with stratified folds (refolded with a
    fresh seed when a fold ends up single-class; error after 10 attempts).
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if ds.n < k:
        raise ValueError("need at least k samples")
    grid = np.asarray(grid, dtype=np.float64).ravel()
    if grid.size == 0:
        raise ValueError("empty grid")
    opts = opts or FitOptions()
    binary = ds.response_mode == "binary"

    rng = np.random.default_rng(seed)
    folds = None
    if binary:
        for _ in range(10):
            cand = _make_folds(ds.n, k, rng, ds.y)
            all_idx = np.arange(ds.n)
            if all(
                _fold_ok(ds.y, np.setdiff1d(all_idx, f), f) for f in cand
            ):
                folds = cand
                break
        if folds is None:
            raise RuntimeError("could not build two-class folds in 10 attempts")
    else:
        folds = _make_folds(ds.n, k, rng, None)

    losses = np.zeros((k, grid.size))
    all_idx = np.arange(ds.n)
    for i, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(all_idx, test_idx)
        mode = "binary" if binary else "gaussian"
        sub = standardize(ds.X[train_idx], ds.y[train_idx], response_mode=mode)
        for j, lam in enumerate(grid):
            if binary:
                fit = fit_logistic_hlasso(sub, groups, PenaltySpec(lam=float(lam)), opts)
                X_te_std = sub.transform(ds.X[test_idx])
                p = predict_proba(fit, X_te_std, groups)
                p = np.clip(p, 1e-12, 1 - 1e-12)
                y_te = ds.y[test_idx]
                losses[i, j] = -float(
                    np.sum(y_te * np.log(p) + (1 - y_te) * np.log(1 - p))
                )
            else:
                if method == "lasso":
                    beta = _lasso_path(sub, np.array([lam]), opts)[0]
                else:
                    fit = fit_hlasso(sub, groups, PenaltySpec(lam=float(lam)), opts)
                    beta = fit.beta
                beta_orig, intercept = destandardize(beta, sub)
                pred = intercept + ds.X[test_idx] @ beta_orig
                losses[i, j] = float(np.sum((pred - ds.y[test_idx]) ** 2))
    curve = losses.mean(axis=0)
    order = np.argsort(-grid)  # descending lambda; first minimum = largest
    best = order[np.argmin(curve[order])]
    return float(grid[best]), curve
