"""Design standardization and the transform back to the original scale.

Columns are centered and scaled to unit L2 norm (not unit variance): the
orthonormal fast path assumes x'x = 1, and the closed-form updates are
stated in that scaling. The Gaussian response is centered; a binary
response is left as 0/1 because the intercept is estimated inside the
logistic solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["StandardizedDataset", "standardize", "destandardize"]


@dataclass(frozen=True)
class StandardizedDataset:
    """Centered, unit-norm design plus the affine transform metadata.

    ``X`` has columns with mean 0 and L2 norm 1. In ``gaussian`` mode ``y``
    is centered; in ``binary`` mode ``y`` is the raw 0/1 vector and
    ``y_mean`` stores the class-1 rate.
    """

    X: np.ndarray
    y: np.ndarray
    column_means: np.ndarray
    column_norms: np.ndarray
    y_mean: float
    n: int
    response_mode: str = "gaussian"

    @property
    def n_vars(self) -> int:
        return self.X.shape[1]

    def transform(self, X_raw: np.ndarray) -> np.ndarray:
        """Apply the fitted centering/scaling to new rows."""
        X_raw = np.asarray(X_raw, dtype=np.float64)
        if X_raw.ndim != 2 or X_raw.shape[1] != self.n_vars:
            raise ValueError(
                f"expected {self.n_vars} columns, got {X_raw.shape}"
            )
        return (X_raw - self.column_means) / self.column_norms


def standardize(
    X_raw: np.ndarray,
    y_raw: np.ndarray,
    response_mode: str = "gaussian",
) -> StandardizedDataset:
    """Center columns, scale them to unit L2 norm, and center a Gaussian y.

    Raises
    ------
    ValueError
        If inputs contain NaN/Inf, n < 2, a column is constant
        ("degenerate column"), or a binary response is not 0/1.
    """
    if response_mode not in ("gaussian", "binary"):
        raise ValueError(f"unknown response_mode {response_mode!r}")
    X_raw = np.asarray(X_raw, dtype=np.float64)
    y_raw = np.asarray(y_raw, dtype=np.float64).ravel()
    if X_raw.ndim != 2:
        raise ValueError("X must be a 2-d matrix")
    n, p = X_raw.shape
    if n < 2:
        raise ValueError("need at least 2 samples")
    if y_raw.shape[0] != n:
        raise ValueError(f"X has {n} rows but y has {y_raw.shape[0]}")
    if not np.isfinite(X_raw).all() or not np.isfinite(y_raw).all():
        raise ValueError("non-finite values in input")

    means = X_raw.mean(axis=0)
    Xc = X_raw - means
    norms = np.sqrt((Xc**2).sum(axis=0))
    scale = np.maximum(np.abs(X_raw).max(axis=0), 1.0)
    degenerate = norms <= 1e-12 * scale * np.sqrt(n)
    if degenerate.any():
        bad = np.flatnonzero(degenerate).tolist()
        raise ValueError(f"degenerate column (constant): indices {bad}")
    X = Xc / norms

    if response_mode == "gaussian":
        y_mean = float(y_raw.mean())
        y = y_raw - y_mean
    else:
        uniq = np.unique(y_raw)
        if not np.isin(uniq, (0.0, 1.0)).all():
            raise ValueError("binary mode requires a 0/1 response")
        y_mean = float(y_raw.mean())
        y = y_raw.copy()

    return StandardizedDataset(
        X=X,
        y=y,
        column_means=means,
        column_norms=norms,
        y_mean=y_mean,
        n=n,
        response_mode=response_mode,
    )


def destandardize(
    beta: np.ndarray,
    ds: StandardizedDataset,
    intercept: float = 0.0,
) -> tuple[np.ndarray, float]:
    """Map standardized-scale coefficients to the original data scale.

    Returns ``(beta_orig, intercept_orig)`` such that
    ``intercept_orig + X_raw @ beta_orig`` equals the standardized-scale
    prediction ``y_base + intercept + X_std @ beta`` pointwise, where
    ``y_base`` is the removed response mean in Gaussian mode and 0 in
    binary mode.
    """
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (ds.n_vars,):
        raise ValueError(
            f"coefficient vector has shape {beta.shape}, expected ({ds.n_vars},)"
        )
    beta_orig = beta / ds.column_norms
    base = ds.y_mean if ds.response_mode == "gaussian" else 0.0
    intercept_orig = base + float(intercept) - float(beta_orig @ ds.column_means)
    return beta_orig, intercept_orig
