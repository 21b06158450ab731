"""scikit-learn style estimators wrapping the functional fitting API.

These handle raw (unstandardized) inputs: standardization happens inside
``fit`` and the reported ``coef_``/``intercept_`` live on the original
data scale, so the estimators compose with sklearn pipelines, grid search
and cross-validation.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .engine import FitOptions, PenaltySpec, fit_hlasso
from .groups import build_group_structure
from .logistic import fit_logistic_hlasso
from .preprocessing import standardize

__all__ = ["HierarchicalLasso", "LogisticHierarchicalLasso"]


def _structure(groups, n_vars):
    if groups is None:
        return build_group_structure([[j] for j in range(n_vars)], n_vars)
    return build_group_structure(groups, n_vars)


class HierarchicalLasso(RegressorMixin, BaseEstimator):
    """Group-sparse linear regression with within-group selection.

    Parameters
    ----------
    groups : list of lists of int, optional
        Disjoint variable groups; default is one singleton group per
        variable.
    lam : float
        Penalty level (single tuning parameter).
    weights : array-like, optional
        Per-variable penalty weights; overrides ``adaptive``.
    adaptive : bool
        Build weights 1/|beta_ols|^gamma from an OLS pilot fit.
    gamma : float
        Exponent of the adaptive weights.
    tol, max_iter : float, int
        Outer-loop convergence controls.

    Attributes
    ----------
    coef_, intercept_ : original-scale coefficients and intercept.
    d_, alpha_ : group multipliers and within-group effects
        (standardized scale).
    converged_, n_iter_, objective_trace_ : fit diagnostics.
    """

    def __init__(self, groups=None, lam=1.0, weights=None, adaptive=False,
                 gamma=1.0, tol=1e-7, max_iter=500):
        self.groups = groups
        self.lam = lam
        self.weights = weights
        self.adaptive = adaptive
        self.gamma = gamma
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        structure = _structure(self.groups, X.shape[1])
        ds = standardize(X, y)
        pen = PenaltySpec(
            lam=self.lam,
            weights=None if self.weights is None else np.asarray(self.weights),
            recipe="ols_power" if self.adaptive and self.weights is None else "unit",
            gamma=self.gamma,
        )
        opts = FitOptions(tol=self.tol, max_outer_iter=self.max_iter)
        result = fit_hlasso(ds, structure, pen, opts)
        self.coef_ = result.beta_original
        self.intercept_ = result.intercept
        self.d_ = result.d
        self.alpha_ = result.alpha
        self.beta_std_ = result.beta
        self.converged_ = result.converged
        self.n_iter_ = result.iterations
        self.objective_trace_ = result.objective_trace
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return self.intercept_ + X @ self.coef_


class LogisticHierarchicalLasso(ClassifierMixin, BaseEstimator):
    """Logistic hierarchical lasso; groups may overlap.

    ``coef_`` holds the per-variable expanded coefficients
    alpha_j * sum_k d_k on the original data scale.
    """

    def __init__(self, groups=None, lam=1.0, weights=None, tol=1e-7,
                 max_iter=500):
        self.groups = groups
        self.lam = lam
        self.weights = weights
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        if len(self.classes_) != 2:
            raise ValueError("binary classification requires exactly 2 classes")
        y01 = (y == self.classes_[1]).astype(np.float64)
        structure = _structure(self.groups, X.shape[1])
        ds = standardize(X, y01, response_mode="binary")
        pen = PenaltySpec(
            lam=self.lam,
            weights=None if self.weights is None else np.asarray(self.weights),
        )
        opts = FitOptions(tol=self.tol, max_outer_iter=self.max_iter)
        result = fit_logistic_hlasso(ds, structure, pen, opts)
        coef_std = result.expanded_coef(structure)
        self.coef_ = coef_std / ds.column_norms
        self.intercept_ = result.intercept - float(self.coef_ @ ds.column_means)
        self.d_ = result.d
        self.alpha_ = result.alpha
        self.converged_ = result.converged
        self.n_iter_ = result.iterations
        self.objective_trace_ = result.objective_trace
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return self.intercept_ + X @ self.coef_

    def predict_proba(self, X):
        eta = self.decision_function(X)
        p1 = 1.0 / (1.0 + np.exp(-np.clip(eta, -700, 700)))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return self.classes_[(self.decision_function(X) >= 0).astype(int)]
