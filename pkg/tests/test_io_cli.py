import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner
from numpy.testing import assert_allclose

from hlasso import PenaltySpec, build_group_structure, fit_hlasso, standardize
from hlasso.cli import main
from hlasso.io import (
    load_data_csv,
    load_group_map,
    parse_grid_spec,
    parse_kv_config,
    read_gmt,
    serialize_fit,
    write_fit_csv,
)


@pytest.fixture
def data_csv(tmp_path, rng):
    X = rng.standard_normal((60, 4))
    y = 3.0 * X[:, 0] + 2.0 * X[:, 1] + 0.3 * rng.standard_normal(60)
    frame = pd.DataFrame(X, columns=["a", "b", "c", "d"])
    frame["y"] = y
    path = tmp_path / "data.csv"
    frame.to_csv(path, index=False)
    return path


@pytest.fixture
def groups_csv(tmp_path):
    path = tmp_path / "groups.csv"
    path.write_text("variable,group\na,g1\nb,g1\nc,g2\nd,g2\n")
    return path


class TestDataCsv:
    def test_roundtrip(self, data_csv):
        X, y, names = load_data_csv(data_csv)
        assert X.shape == (60, 4)
        assert names == ["a", "b", "c", "d"]

    def test_explicit_response(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x1,target\n1,2\n3,4\n5,7\n")
        X, y, names = load_data_csv(path, response="target")
        assert names == ["x1"]
        assert_allclose(y, [2, 4, 7])

    def test_missing_response(self, data_csv):
        with pytest.raises(ValueError, match="response column"):
            load_data_csv(data_csv, response="nope")

    def test_last_column_fallback(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x1,x2,resp\n1,2,0\n3,4,1\n4,1,0\n")
        X, y, names = load_data_csv(path)
        assert names == ["x1", "x2"]


class TestGroupMap:
    def test_csv_map(self, groups_csv):
        g = load_group_map(groups_csv, ["a", "b", "c", "d"])
        assert g.groups == ((0, 1), (2, 3))
        assert g.group_ids == ("g1", "g2")

    def test_csv_overlap(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("variable,group\na,g1\nb,g1\nb,g2\nc,g2\n")
        g = load_group_map(path, ["a", "b", "c"])
        assert g.overlapping

    def test_unknown_variable(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("variable,group\nzz,g1\n")
        with pytest.raises(ValueError, match="unknown variable"):
            load_group_map(path, ["a"])

    def test_json_names_and_labels(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps([["set1", ["a", "b"]], ["set2", ["c"]]]))
        g = load_group_map(path, ["a", "b", "c"])
        assert g.group_ids == ("set1", "set2")

    def test_json_bare_indices(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text("[[0, 1], [2]]")
        g = load_group_map(path, ["a", "b", "c"])
        assert g.groups == ((0, 1), (2,))


class TestGmt:
    def test_reads_sets_and_overlap(self, tmp_path):
        path = tmp_path / "sets.gmt"
        path.write_text(
            "pathwayA\tdesc\tg1\tg2\tg3\n"
            "pathwayB\tanother\tg3\tg4\tunknown_gene\n"
        )
        g = read_gmt(path, ["g1", "g2", "g3", "g4"])
        assert g.n_groups == 2
        assert g.overlapping  # g3 shared
        assert g.group_ids == ("pathwayA", "pathwayB")

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.gmt"
        path.write_text("onlyname\n")
        with pytest.raises(ValueError, match="malformed GMT"):
            read_gmt(path, ["g1"])

    def test_uncovered_variable_fails(self, tmp_path):
        path = tmp_path / "sets.gmt"
        path.write_text("pathwayA\tdesc\tg1\n")
        with pytest.raises(ValueError, match="not assigned"):
            read_gmt(path, ["g1", "g2"])


class TestConfigHelpers:
    def test_grid_spec(self):
        grid = parse_grid_spec("0.1:10:5")
        assert grid.shape == (5,)
        assert grid[0] == 10.0 and np.isclose(grid[-1], 0.1)
        assert (np.diff(grid) < 0).all()
        assert parse_grid_spec("auto") is None
        with pytest.raises(ValueError):
            parse_grid_spec("1:2")
        with pytest.raises(ValueError):
            parse_grid_spec("5:1:3")

    def test_kv_config(self, tmp_path):
        path = tmp_path / "bench.cfg"
        path.write_text("# comment\ncase = 1\nmethod = hlasso\nreps=2\nseed = 7\n")
        cfg = parse_kv_config(path)
        assert cfg == {"case": "1", "method": "hlasso", "reps": "2", "seed": "7"}
        bad = tmp_path / "bad.cfg"
        bad.write_text("no equals sign\n")
        with pytest.raises(ValueError):
            parse_kv_config(bad)


class TestFitSerialization:
    def test_roundtrip_precision(self, tmp_path, rng):
        X = rng.standard_normal((30, 3))
        y = X @ np.array([1.0, 0.0, -2.0]) + 0.1 * rng.standard_normal(30)
        ds = standardize(X, y)
        g = build_group_structure([[0, 1], [2]], 3)
        fit = fit_hlasso(ds, g, PenaltySpec(lam=0.5))
        doc = serialize_fit(fit, groups=g, config={"lambda": 0.5})
        for key in ("lambda", "d", "alpha", "beta", "intercept", "converged",
                    "iterations", "objective"):
            assert key in doc
        path = tmp_path / "fit.csv"
        write_fit_csv(path, ["a", "b", "c"], fit.beta_original, fit.intercept)
        body = path.read_text().splitlines()
        values = {row.split(",")[0]: row.split(",")[1] for row in body[1:]}
        assert float(values["a"]) == fit.beta_original[0]  # 17 digits round-trip


class TestMisclassification:
    def test_report_columns(self, tmp_path):
        from hlasso.io import write_misclassification_csv

        y = np.array([0.0, 1.0, 1.0, 0.0])
        p = np.array([0.2, 0.9, 0.4, 0.1])
        path = tmp_path / "mis.csv"
        write_misclassification_csv(path, y, p)
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["sample", "y_true", "prob", "y_pred", "misclassified"]
        assert frame["misclassified"].tolist() == [0, 0, 1, 0]


class TestCli:
    def test_fit_json_and_exit_codes(self, data_csv, groups_csv, tmp_path):
        runner = CliRunner()
        out = tmp_path / "fit.json"
        result = runner.invoke(main, [
            "fit", "--data", str(data_csv), "--groups", str(groups_csv),
            "--lambda", "25.0", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert doc["config"]["subcommand"] == "fit"
        assert len(doc["coef_original"]) == 4
        # signal lives in group g1 only: exactly one active group
        d = np.array(doc["d"])
        assert (d > 0).sum() == 1

    def test_fit_huge_lambda_null_artifact(self, data_csv, groups_csv, tmp_path):
        runner = CliRunner()
        out = tmp_path / "fit.json"
        result = runner.invoke(main, [
            "fit", "--data", str(data_csv), "--groups", str(groups_csv),
            "--lambda", "1e9", "--out", str(out),
        ])
        assert result.exit_code == 0
        doc = json.loads(out.read_text())
        assert_allclose(doc["beta"], 0.0)

    def test_missing_group_map_exits_1(self, data_csv, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "fit", "--data", str(data_csv), "--groups", str(tmp_path / "nope.csv"),
            "--lambda", "1.0",
        ])
        assert result.exit_code == 1
        assert "not found" in result.output

    def test_fit_csv_format(self, data_csv, groups_csv, tmp_path):
        runner = CliRunner()
        out = tmp_path / "fit.csv"
        result = runner.invoke(main, [
            "fit", "--data", str(data_csv), "--groups", str(groups_csv),
            "--lambda", "25.0", "--out", str(out), "--format", "csv",
        ])
        assert result.exit_code == 0
        assert out.read_text().startswith("#")

    def test_gmt_requires_binomial(self, data_csv, tmp_path):
        gmt = tmp_path / "s.gmt"
        gmt.write_text("s1\td\ta\tb\tc\td\n")
        runner = CliRunner()
        result = runner.invoke(main, [
            "fit", "--data", str(data_csv), "--gmt", str(gmt),
            "--family", "gaussian", "--lambda", "1.0",
        ])
        assert result.exit_code == 1
        assert "binomial" in result.output

    def test_path_command(self, data_csv, groups_csv, tmp_path):
        runner = CliRunner()
        out = tmp_path / "path.json"
        result = runner.invoke(main, [
            "path", "--data", str(data_csv), "--groups", str(groups_csv),
            "--grid", "10:400:4", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert len(doc["fits"]) == 4

    def test_simulate_deterministic_bytes(self, tmp_path):
        runner = CliRunner()
        args = [
            "simulate", "--case", "1", "--method", "ols", "--reps", "2",
            "--seed", "7", "--jobs", "1",
        ]
        r1 = runner.invoke(main, args + ["--out", str(tmp_path / "runA")])
        r2 = runner.invoke(main, args + ["--out", str(tmp_path / "runB")])
        assert r1.exit_code == 0, r1.output
        assert r2.exit_code == 0
        a = (tmp_path / "runA_reps.csv").read_bytes()
        b = (tmp_path / "runB_reps.csv").read_bytes()
        assert a == b
        sa = json.loads((tmp_path / "runA_summary.json").read_text())
        sb = json.loads((tmp_path / "runB_summary.json").read_text())
        sa["config"].pop("case")  # configs identical except out prefix (not stored)
        sb["config"].pop("case")
        assert sa["mse"] == sb["mse"]

    def test_simulate_config_file(self, tmp_path):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text("case = 2\nmethod = ols\nreps = 1\nseed = 3\n")
        runner = CliRunner()
        result = runner.invoke(main, [
            "simulate", "--config", str(cfg), "--out", str(tmp_path / "run"),
            "--jobs", "1",
        ])
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "run_summary.json").read_text())
        assert summary["case"] == 2
        assert summary["zero_var_pct"] == 0.0  # OLS never zeros

    def test_tune_command(self, data_csv, groups_csv, tmp_path):
        runner = CliRunner()
        out = tmp_path / "tune.json"
        result = runner.invoke(main, [
            "tune", "--data", str(data_csv), "--groups", str(groups_csv),
            "--folds", "3", "--grid", "5:100:4", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert doc["lambda"] in doc["grid"]
        assert len(doc["cv_curve"]) == 4

    def test_lrt_command(self, tmp_path, rng):
        n = 150
        X = rng.standard_normal((n, 3))
        eta = 1.5 * X[:, 0] - 1.0 * X[:, 1]
        y = (rng.random(n) < 1 / (1 + np.exp(-eta))).astype(int)
        frame = pd.DataFrame(X, columns=["a", "b", "c"])
        frame["y"] = y
        data = tmp_path / "bin.csv"
        frame.to_csv(data, index=False)
        groups = tmp_path / "g.csv"
        groups.write_text("variable,group\na,g1\nb,g1\nc,g2\n")
        runner = CliRunner()
        out = tmp_path / "lrt.json"
        result = runner.invoke(main, [
            "lrt", "--data", str(data), "--groups", str(groups),
            "--family", "binomial", "--lambda", "1e-6",
            "--null-set", "c", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert doc["q"] == 1
        assert 0.0 <= doc["p_value"] <= 1.0

    def test_fit_binomial_with_misclass_report(self, tmp_path, rng):
        n = 120
        X = rng.standard_normal((n, 3))
        eta = 2.0 * X[:, 0] - 1.5 * X[:, 1]
        y = (rng.random(n) < 1 / (1 + np.exp(-eta))).astype(int)
        frame = pd.DataFrame(X, columns=["a", "b", "c"])
        frame["y"] = y
        data = tmp_path / "bin.csv"
        frame.to_csv(data, index=False)
        groups = tmp_path / "g.csv"
        groups.write_text("variable,group\na,g1\nb,g1\nc,g2\n")
        runner = CliRunner()
        mis = tmp_path / "mis.csv"
        result = runner.invoke(main, [
            "fit", "--data", str(data), "--groups", str(groups),
            "--family", "binomial", "--lambda", "0.5",
            "--out", str(tmp_path / "fit.json"), "--misclass", str(mis),
        ])
        assert result.exit_code == 0, result.output
        report = pd.read_csv(mis)
        assert len(report) == n
        assert report["misclassified"].mean() < 0.3

    def test_gmt_binomial_end_to_end(self, tmp_path, rng):
        # gene-set style workflow: overlapping sets, logistic fit, LRT
        n, genes = 120, ["gA", "gB", "gC", "gD", "gE"]
        X = rng.standard_normal((n, 5))
        eta = 1.8 * X[:, 0] - 1.4 * X[:, 2]
        y = (rng.random(n) < 1 / (1 + np.exp(-eta))).astype(int)
        frame = pd.DataFrame(X, columns=genes)
        frame["status"] = y
        data = tmp_path / "expr.csv"
        frame.to_csv(data, index=False)
        gmt = tmp_path / "sets.gmt"
        gmt.write_text(
            "setA\tpathway one\tgA\tgB\tgC\n"
            "setB\tpathway two\tgC\tgD\tgE\tnot_measured\n"
        )
        runner = CliRunner()
        out = tmp_path / "fit.json"
        result = runner.invoke(main, [
            "fit", "--data", str(data), "--response", "status",
            "--gmt", str(gmt), "--family", "binomial", "--lambda", "0.5",
            "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert doc["group_ids"] == ["setA", "setB"]
        assert len(doc["alpha"]) == 5  # one intrinsic effect per gene
        lrt_out = tmp_path / "lrt.json"
        result = runner.invoke(main, [
            "lrt", "--data", str(data), "--response", "status",
            "--gmt", str(gmt), "--family", "binomial", "--lambda", "1e-6",
            "--null-set", "gE", "--out", str(lrt_out),
        ])
        assert result.exit_code == 0, result.output
        lrt_doc = json.loads(lrt_out.read_text())
        assert lrt_doc["q"] == 1 and 0 <= lrt_doc["p_value"] <= 1

    def test_lrt_unknown_variable_exits_1(self, tmp_path, rng):
        X = rng.standard_normal((50, 2))
        y = (rng.random(50) < 0.5).astype(int)
        frame = pd.DataFrame(X, columns=["a", "b"])
        frame["y"] = y
        data = tmp_path / "bin.csv"
        frame.to_csv(data, index=False)
        groups = tmp_path / "g.csv"
        groups.write_text("variable,group\na,g1\nb,g1\n")
        runner = CliRunner()
        result = runner.invoke(main, [
            "lrt", "--data", str(data), "--groups", str(groups),
            "--family", "binomial", "--lambda", "0.1", "--null-set", "zz",
        ])
        assert result.exit_code == 1
        assert "unknown variables" in result.output
