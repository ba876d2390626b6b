"""Frank-Wolfe Lasso solver with emulated quantum subroutines and query ledgers."""

import json as _json

from ._core import (
    CsvError,
    EmulatorConfig,
    KPTree,
    SampleSet,
    curvature_exact,
    empirical_gradient,
    empirical_loss,
    gen_lasso_hidden,
    gen_ridge_hidden,
    load_csv,
    recover_set_lasso,
    recover_set_ridge,
    save_csv,
    sym_diff,
)
from . import _core

__all__ = [
    "CsvError",
    "EmulatorConfig",
    "KPTree",
    "SampleSet",
    "curvature_exact",
    "distance_bound_audit",
    "empirical_gradient",
    "empirical_loss",
    "esf_via_lasso",
    "fit_loglog",
    "gen_lasso_hidden",
    "gen_ridge_hidden",
    "lasso_fw_with_guess",
    "lasso_solve",
    "load_csv",
    "recover_set_lasso",
    "recover_set_ridge",
    "ridge_solve_baseline",
    "save_csv",
    "scaling_point",
    "sym_diff",
]


def _config(config):
    return EmulatorConfig() if config is None else config


def lasso_solve(samples, eps, mode="classical", seed=1, config=None, trace=False):
    """Best of the one-step candidate and the curvature-ladder runs, as a report dict."""
    return _json.loads(_core._lasso_solve(samples, eps, mode, seed, _config(config), trace))


def lasso_fw_with_guess(samples, C, eps, mode="classical", seed=1, config=None, trace=True):
    """Single Frank-Wolfe run with curvature guess C."""
    return _json.loads(
        _core._lasso_fw_with_guess(samples, C, eps, mode, seed, _config(config), trace)
    )


def ridge_solve_baseline(samples, eps, max_iter=10000, trace=False):
    """Projected gradient descent onto the l2 ball."""
    return _json.loads(_core._ridge_solve_baseline(samples, eps, max_iter, trace))


def distance_bound_audit(N, m, p):
    """Exact hypergeometric/binomial distances against their bounds."""
    return _json.loads(_core._distance_bound_audit(N, m, p))


def esf_via_lasso(d, w, p_num, p_den, N, eps, M, seed=1, rounds=15):
    """Worst-case matrix recovery through the classical Lasso solver."""
    return _json.loads(_core._esf_via_lasso(d, w, p_num, p_den, N, eps, M, seed, rounds))


def fit_loglog(x, cost, min_points=4):
    """Least-squares slope of log2(cost) against log2(x)."""
    return _json.loads(_core._fit_loglog(list(x), list(cost), min_points))


def scaling_point(d, eps, mode="quantum", N=256, w=5, p=0.1, seed=1, config=None):
    """Charged-query ledger of one lasso_solve on a planted instance."""
    return _json.loads(_core._scaling_point(d, eps, mode, N, w, p, seed, _config(config)))
