"""Command-line front end: fit models on CSV data, run lambda paths,
execute benchmark suites, tune by cross-validation, and run LRT
diagnostics.

Exit codes: 0 = success (fit converged), 2 = fit completed without
converging, 1 = input error. Every artifact embeds the config that
produced it.
"""

from __future__ import annotations

import os
import sys

import click
import numpy as np
from scipy.stats import chi2

from . import io as hio
from .engine import PenaltySpec, fit_hlasso, fit_path, lambda_grid
from .logistic import LrtError, fit_logistic_hlasso, lrt_statistic
from .preprocessing import standardize
from .simbench import run_benchmark, tune_kfold

_INPUT_ERRORS = (ValueError, OSError, KeyError, RuntimeError)


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_problem(data, response, groups_path, gmt_path, family):
    if data is None:
        _fail("--data is required")
    if not os.path.exists(data):
        _fail(f"data file not found: {data}")
    X, y, names = hio.load_data_csv(data, response=response)
    if gmt_path is not None:
        if family != "binomial":
            _fail("--gmt input requires --family binomial")
        if not os.path.exists(gmt_path):
            _fail(f"GMT file not found: {gmt_path}")
        structure = hio.read_gmt(gmt_path, names)
    elif groups_path is not None:
        if not os.path.exists(groups_path):
            _fail(f"group map file not found: {groups_path}")
        structure = hio.load_group_map(groups_path, names)
    else:
        _fail("one of --groups or --gmt is required")
    mode = "binary" if family == "binomial" else "gaussian"
    ds = standardize(X, y, response_mode=mode)
    return ds, structure, names


def _penalty(lam, adaptive, gamma, family):
    if adaptive and family == "binomial":
        _fail("--adaptive is supported for the gaussian family only")
    return PenaltySpec(
        lam=lam, recipe="ols_power" if adaptive else "unit", gamma=gamma
    )


@click.group()
def main():
    """Hierarchical lasso: group variable selection with within-group
    flexibility."""


@main.command("fit")
@click.option("--data", type=str, default=None, help="CSV with header; response column per --response.")
@click.option("--response", type=str, default=None, help="Response column name (default 'y' or last column).")
@click.option("--groups", "groups_path", type=str, default=None, help="Group map CSV (variable,group) or JSON list of lists.")
@click.option("--gmt", "gmt_path", type=str, default=None, help="GMT gene-set file (binomial family only).")
@click.option("--family", type=click.Choice(["gaussian", "binomial"]), default="gaussian")
@click.option("--lambda", "lam", type=float, required=True, help="Penalty level.")
@click.option("--adaptive", is_flag=True, help="OLS-pilot adaptive weights.")
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default=None, help="Output path (default: stdout).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--misclass", "misclass_path", type=str, default=None,
              help="Also write a training misclassification CSV (binomial only).")
def cmd_fit(data, response, groups_path, gmt_path, family, lam, adaptive, gamma,
            seed, out, fmt, misclass_path):
    """Fit one model at a fixed lambda and write the fit artifact."""
    config = {
        "subcommand": "fit", "data": data, "response": response,
        "groups": groups_path, "gmt": gmt_path, "family": family,
        "lambda": lam, "adaptive": adaptive, "gamma": gamma, "seed": seed,
    }
    try:
        if misclass_path is not None and family != "binomial":
            raise ValueError("--misclass requires --family binomial")
        ds, structure, names = _load_problem(data, response, groups_path, gmt_path, family)
        pen = _penalty(lam, adaptive, gamma, family)
        if family == "binomial":
            fit = fit_logistic_hlasso(ds, structure, pen)
            coef = fit.expanded_coef(structure) / ds.column_norms
            intercept = fit.intercept - float(coef @ ds.column_means)
            if misclass_path is not None:
                proba = 1.0 / (1.0 + np.exp(-fit.linear_predictor))
                hio.write_misclassification_csv(misclass_path, ds.y, proba)
        else:
            fit = fit_hlasso(ds, structure, pen)
            coef, intercept = fit.beta_original, fit.intercept
    except _INPUT_ERRORS as exc:
        _fail(str(exc))

    doc = hio.serialize_fit(fit, groups=structure, config=config)
    doc["variables"] = names
    doc["coef_original"] = coef.tolist()
    doc["intercept_original"] = intercept
    if out is None:
        click.echo(_dumps(doc))
    elif fmt == "json":
        hio.write_json(out, doc)
    else:
        hio.write_fit_csv(out, names, coef, intercept,
                          config={k: v for k, v in config.items() if v is not None})
    sys.exit(0 if fit.converged else 2)


@main.command("path")
@click.option("--data", type=str, default=None)
@click.option("--response", type=str, default=None)
@click.option("--groups", "groups_path", type=str, default=None)
@click.option("--gmt", "gmt_path", type=str, default=None)
@click.option("--family", type=click.Choice(["gaussian", "binomial"]), default="gaussian")
@click.option("--grid", type=str, default="auto", show_default=True, help="min:max:count or 'auto'.")
@click.option("--adaptive", is_flag=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--out", type=str, default=None)
def cmd_path(data, response, groups_path, gmt_path, family, grid, adaptive, gamma, out):
    """Fit a descending lambda path and write one artifact per grid point."""
    config = {
        "subcommand": "path", "data": data, "response": response,
        "groups": groups_path, "gmt": gmt_path, "family": family,
        "grid": grid, "adaptive": adaptive, "gamma": gamma,
    }
    try:
        ds, structure, names = _load_problem(data, response, groups_path, gmt_path, family)
        grid_values = hio.parse_grid_spec(grid)
        if family == "binomial":
            if grid_values is None:
                _fail("binomial path needs an explicit --grid min:max:count")
            fits = [
                fit_logistic_hlasso(ds, structure, PenaltySpec(lam=float(l)))
                for l in grid_values
            ]
        else:
            pen0 = _penalty(0.0, adaptive, gamma, family)
            w = pen0.resolve_weights(ds)
            if grid_values is None:
                grid_values = lambda_grid(ds, structure, weights=w)
            fits = fit_path(ds, structure, grid_values, weights=w)
    except _INPUT_ERRORS as exc:
        _fail(str(exc))

    doc = {
        "config": config,
        "variables": names,
        "grid": [float(l) for l in grid_values],
        "fits": [hio.serialize_fit(f, groups=structure) for f in fits],
    }
    if out is None:
        click.echo(_dumps(doc))
    else:
        hio.write_json(out, doc)
    sys.exit(0 if all(f.converged for f in fits) else 2)


@main.command("simulate")
@click.option("--case", type=int, default=None)
@click.option("--method", type=click.Choice(["hlasso", "adaptive_hlasso", "lasso", "ols"]), default=None)
@click.option("--reps", type=int, default=None)
@click.option("--grid", type=str, default="auto", show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=None, help="Parallel replications (default: all cores).")
@click.option("--config", "config_path", type=str, default=None, help="Flat key=value benchmark config file.")
@click.option("--out", type=str, required=True, help="Output prefix for <prefix>_reps.csv and <prefix>_summary.json.")
def cmd_simulate(case, method, reps, grid, seed, jobs, config_path, out):
    """Run the simulation benchmark and write per-rep CSV plus a summary."""
    try:
        cfg: dict = {}
        if config_path is not None:
            if not os.path.exists(config_path):
                _fail(f"config file not found: {config_path}")
            cfg = hio.parse_kv_config(config_path)
        case = case if case is not None else int(cfg.get("case", 0))
        method = method if method is not None else cfg.get("method")
        reps = reps if reps is not None else int(cfg.get("reps", 0))
        seed = seed if seed is not None else int(cfg.get("seed", 0))
        grid = cfg.get("grid", grid) if grid == "auto" else grid
        if method is None:
            _fail("method is required (flag or config)")
        if case not in (1, 2):
            _fail("case must be 1 or 2")
        if reps < 1:
            _fail("reps must be at least 1")
        grid_values = hio.parse_grid_spec(grid)
        n_jobs = jobs if jobs is not None else (os.cpu_count() or 1)
        report = run_benchmark(
            case, method, reps, lambda_grid_values=grid_values,
            seed=seed, n_jobs=n_jobs,
        )
    except _INPUT_ERRORS as exc:
        _fail(str(exc))

    config = {
        "subcommand": "simulate", "case": case, "method": method,
        "reps": reps, "grid": grid, "seed": seed,
    }
    csv_path, json_path = hio.write_sim_report(report, out, config=config)
    click.echo(f"wrote {csv_path} and {json_path}")
    if report.reps == 0:
        _fail("all replications failed")
    sys.exit(0)


@main.command("tune")
@click.option("--data", type=str, default=None)
@click.option("--response", type=str, default=None)
@click.option("--groups", "groups_path", type=str, default=None)
@click.option("--gmt", "gmt_path", type=str, default=None)
@click.option("--family", type=click.Choice(["gaussian", "binomial"]), default="gaussian")
@click.option("--method", type=click.Choice(["hlasso", "lasso"]), default="hlasso", show_default=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--grid", type=str, default="auto", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default=None)
def cmd_tune(data, response, groups_path, gmt_path, family, method, folds, grid, seed, out):
    """Choose lambda by k-fold cross-validation."""
    config = {
        "subcommand": "tune", "data": data, "response": response,
        "groups": groups_path, "gmt": gmt_path, "family": family,
        "method": method, "folds": folds, "grid": grid, "seed": seed,
    }
    try:
        ds, structure, _names = _load_problem(data, response, groups_path, gmt_path, family)
        grid_values = hio.parse_grid_spec(grid)
        if grid_values is None:
            grid_values = lambda_grid(ds, structure)
        lam, curve = tune_kfold(ds, structure, method, folds, grid_values, seed=seed)
    except _INPUT_ERRORS as exc:
        _fail(str(exc))
    doc = {
        "config": config,
        "lambda": lam,
        "grid": [float(l) for l in grid_values],
        "cv_curve": [float(v) for v in curve],
    }
    if out is None:
        click.echo(_dumps(doc))
    else:
        hio.write_json(out, doc)
    sys.exit(0)


@main.command("lrt")
@click.option("--data", type=str, default=None)
@click.option("--response", type=str, default=None)
@click.option("--groups", "groups_path", type=str, default=None)
@click.option("--gmt", "gmt_path", type=str, default=None)
@click.option("--family", type=click.Choice(["gaussian", "binomial"]), default="binomial")
@click.option("--lambda", "lam", type=float, required=True)
@click.option("--null-set", "null_set", type=str, required=True,
              help="Comma-separated variable names pinned to zero under the null.")
@click.option("--out", type=str, default=None)
def cmd_lrt(data, response, groups_path, gmt_path, family, lam, null_set, out):
    """Likelihood ratio test for coordinate-zero hypotheses."""
    config = {
        "subcommand": "lrt", "data": data, "response": response,
        "groups": groups_path, "gmt": gmt_path, "family": family,
        "lambda": lam, "null_set": null_set,
    }
    try:
        ds, structure, names = _load_problem(data, response, groups_path, gmt_path, family)
        requested = [s.strip() for s in null_set.split(",") if s.strip()]
        unknown = [s for s in requested if s not in names]
        if unknown:
            _fail(f"null set names unknown variables: {unknown}")
        null_idx = [names.index(s) for s in requested]
        t = lrt_statistic(ds, structure, PenaltySpec(lam=lam), None, null_idx)
    except LrtError as exc:
        _fail(f"LRT optimization failed: {exc}")
    except _INPUT_ERRORS as exc:
        _fail(str(exc))
    q = len(null_idx)
    doc = {
        "config": config,
        "t": float(t),
        "q": q,
        "p_value": float(chi2.sf(t, q)),
        "null_set": requested,
    }
    if out is None:
        click.echo(_dumps(doc))
    else:
        hio.write_json(out, doc)
    sys.exit(0)


def _dumps(doc) -> str:
    import json

    return json.dumps(doc, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
