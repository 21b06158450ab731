"""Hierarchical lasso for group variable selection.

Group-sparse regression that removes unimportant groups while keeping the
flexibility of selecting variables within a group, via the factorization
beta_kj = d_k * alpha_kj with a non-negative group multiplier d_k and
L1-penalized within-group effects. Includes the orthogonal-design closed
forms, adaptive penalty weights, a logistic extension supporting
overlapping groups, a likelihood ratio test for coordinate-zero
hypotheses, and a simulation benchmark harness.
"""

from .engine import (
    FitOptions,
    HLassoFit,
    PenaltySpec,
    adaptive_weights,
    check_two_penalty_equivalence,
    fit_hlasso,
    fit_hlasso_orthogonal,
    fit_path,
    lambda_grid,
    objective_beta,
    recover_d_alpha,
)
from .estimators import HierarchicalLasso, LogisticHierarchicalLasso
from .groups import GroupStructure, build_group_structure
from .logistic import (
    LogisticHLassoFit,
    fit_logistic_hlasso,
    logistic_loglik,
    lrt_statistic,
    predict_proba,
)
from .preprocessing import StandardizedDataset, destandardize, standardize
from .solvers import (
    ConvergenceError,
    GarroteSubproblem,
    LassoSubproblem,
    kkt_residual,
    soft_threshold,
    solve_nonneg_garrote,
    solve_weighted_lasso,
)

__version__ = "0.1.0"

__all__ = [
    "GroupStructure",
    "build_group_structure",
    "StandardizedDataset",
    "standardize",
    "destandardize",
    "soft_threshold",
    "LassoSubproblem",
    "GarroteSubproblem",
    "solve_weighted_lasso",
    "solve_nonneg_garrote",
    "kkt_residual",
    "ConvergenceError",
    "PenaltySpec",
    "FitOptions",
    "HLassoFit",
    "fit_hlasso",
    "fit_hlasso_orthogonal",
    "fit_path",
    "lambda_grid",
    "objective_beta",
    "recover_d_alpha",
    "adaptive_weights",
    "check_two_penalty_equivalence",
    "LogisticHLassoFit",
    "logistic_loglik",
    "fit_logistic_hlasso",
    "predict_proba",
    "lrt_statistic",
    "HierarchicalLasso",
    "LogisticHierarchicalLasso",
    "__version__",
]
