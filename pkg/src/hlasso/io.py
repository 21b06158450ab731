"""File formats: CSV data ingestion, group maps, GMT gene-set files, fit
artifacts, benchmark configs and reports.

All numerics are IEEE doubles; CSV output uses 17 significant digits so
values round-trip exactly. JSON artifacts embed the producing config and
are written with sorted keys, so identical configs give identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd

from .engine import HLassoFit
from .groups import GroupStructure, build_group_structure
from .logistic import LogisticHLassoFit

__all__ = [
    "load_data_csv",
    "load_group_map",
    "read_gmt",
    "parse_grid_spec",
    "parse_kv_config",
    "serialize_fit",
    "write_json",
    "write_fit_csv",
    "write_sim_report",
    "write_misclassification_csv",
]

_FLOAT_FMT = "%.17g"


def load_data_csv(
    path: str | Path, response: str | None = None
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Read a headered CSV into (X, y, variable_names).

    The response column is ``response`` when given, else a column named
    ``y``, else the last column.
    """
    df = pd.read_csv(path)
    if df.shape[1] < 2:
        raise ValueError("data CSV needs at least one predictor and a response")
    if response is None:
        response = "y" if "y" in df.columns else df.columns[-1]
    if response not in df.columns:
        raise ValueError(f"response column {response!r} not found in {path}")
    y = df[response].to_numpy(dtype=np.float64)
    Xdf = df.drop(columns=[response])
    bad = [c for c in Xdf.columns if not np.issubdtype(Xdf[c].dtype, np.number)]
    if bad:
        raise ValueError(f"non-numeric predictor column(s): {bad}")
    return Xdf.to_numpy(dtype=np.float64), y, list(Xdf.columns)


def load_group_map(path: str | Path, var_names: list[str]) -> GroupStructure:
    """Build a group structure from a two-column CSV or a JSON list of lists.

    CSV rows are (variable_name, group_id); a variable may appear under
    several group ids (overlap). JSON is a list of groups, each either a
    list of variable names/indices or a ["label", [members]] pair.
    """
    path = Path(path)
    name_to_idx = {name: i for i, name in enumerate(var_names)}

    def resolve(member) -> int:
        if isinstance(member, str):
            if member not in name_to_idx:
                raise ValueError(f"group map references unknown variable {member!r}")
            return name_to_idx[member]
        return int(member)

    if path.suffix.lower() == ".json":
        raw = json.loads(path.read_text())
        if not isinstance(raw, list):
            raise ValueError("JSON group map must be a list of groups")
        spec = []
        for k, entry in enumerate(raw):
            if (
                isinstance(entry, list)
                and len(entry) == 2
                and isinstance(entry[0], str)
                and isinstance(entry[1], list)
            ):
                label, members = entry
            else:
                label, members = str(k), entry
            spec.append((label, [resolve(m) for m in members]))
        return build_group_structure(spec, n_vars=len(var_names))

    df = pd.read_csv(path)
    if df.shape[1] < 2:
        raise ValueError("group map CSV needs (variable_name, group_id) columns")
    order: list[str] = []
    members: dict[str, list[int]] = {}
    for var, gid in zip(df.iloc[:, 0], df.iloc[:, 1]):
        gid = str(gid)
        if gid not in members:
            members[gid] = []
            order.append(gid)
        members[gid].append(resolve(str(var)))
    return build_group_structure(
        [(gid, members[gid]) for gid in order], n_vars=len(var_names)
    )


def read_gmt(path: str | Path, var_names: list[str]) -> GroupStructure:
    """Read a GMT gene-set file (tab-separated: name, description, members).

    Members absent from ``var_names`` are ignored; sets left empty are
    dropped. Every variable must end up in at least one set.
    """
    name_to_idx = {name: i for i, name in enumerate(var_names)}
    spec = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) < 3:
            raise ValueError(f"malformed GMT line (need name, description, members): {line!r}")
        set_name, _desc, *genes = parts
        idx = [name_to_idx[g] for g in genes if g in name_to_idx]
        if idx:
            spec.append((set_name, sorted(set(idx))))
    if not spec:
        raise ValueError("no usable gene-sets in GMT file")
    return build_group_structure(spec, n_vars=len(var_names))


def parse_grid_spec(spec: str) -> np.ndarray | None:
    """Parse ``min:max:count`` into a descending log grid; "auto" -> None."""
    if spec == "auto":
        return None
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("grid spec must be min:max:count or 'auto'")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if lo <= 0 or hi <= lo or count < 1:
        raise ValueError("grid spec needs 0 < min < max and count >= 1")
    return np.geomspace(hi, lo, count)


def parse_kv_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file with # comments."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def serialize_fit(
    fit: HLassoFit | LogisticHLassoFit,
    groups: GroupStructure | None = None,
    config: dict | None = None,
) -> dict:
    """JSON-ready dict for a fit artifact."""
    if isinstance(fit, HLassoFit):
        doc = {
            "lambda": fit.lam,
            "d": fit.d.tolist(),
            "alpha": fit.alpha.tolist(),
            "beta": fit.beta.tolist(),
            "beta_original": fit.beta_original.tolist(),
            "intercept": fit.intercept,
            "converged": bool(fit.converged),
            "iterations": int(fit.iterations),
            "objective": fit.objective,
        }
    elif isinstance(fit, LogisticHLassoFit):
        doc = {
            "lambda": fit.lam,
            "d": fit.d.tolist(),
            "alpha": fit.alpha.tolist(),
            "intercept": fit.intercept,
            "converged": bool(fit.converged),
            "iterations": int(fit.iterations),
            "objective": fit.objective,
            "loglik": fit.loglik,
            "diagnostic": fit.diagnostic,
        }
        if groups is not None:
            doc["beta"] = fit.expanded_coef(groups).tolist()
    else:
        raise TypeError(f"cannot serialize {type(fit).__name__}")
    if groups is not None:
        doc["group_ids"] = list(groups.group_ids)
    if config is not None:
        doc["config"] = config
    return doc


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_fit_csv(
    path: str | Path,
    names: list[str],
    coef_original: np.ndarray,
    intercept: float,
    config: dict | None = None,
) -> None:
    """Coefficient table on the original data scale, full precision."""
    lines = []
    if config is not None:
        for key in sorted(config):
            lines.append(f"# {key}={config[key]}")
    lines.append("variable,coefficient")
    lines.append("(intercept)," + _FLOAT_FMT % intercept)
    for name, value in zip(names, coef_original):
        lines.append(f"{name}," + _FLOAT_FMT % value)
    Path(path).write_text("\n".join(lines) + "\n")


def write_sim_report(report, out_prefix: str | Path, config: dict | None = None) -> tuple[Path, Path]:
    """Per-rep CSV plus a JSON summary named after the table columns."""
    out_prefix = Path(out_prefix)
    csv_path = out_prefix.with_name(out_prefix.name + "_reps.csv")
    json_path = out_prefix.with_name(out_prefix.name + "_summary.json")
    frame = pd.DataFrame(report.per_rep_rows())
    frame.to_csv(csv_path, index=False, float_format=_FLOAT_FMT)
    summary = report.summary_dict()
    if report.failures:
        summary["failures"] = [
            {"rep": rep, "error": err} for rep, err in report.failures
        ]
    if config is not None:
        summary["config"] = config
    write_json(json_path, summary)
    return csv_path, json_path


def write_misclassification_csv(
    path: str | Path, y: np.ndarray, proba: np.ndarray, threshold: float = 0.5
) -> None:
    pred = (proba >= threshold).astype(int)
    frame = pd.DataFrame(
        {
            "sample": np.arange(len(y)),
            "y_true": y.astype(int),
            "prob": proba,
            "y_pred": pred,
            "misclassified": (pred != y.astype(int)).astype(int),
        }
    )
    frame.to_csv(path, index=False, float_format=_FLOAT_FMT)
