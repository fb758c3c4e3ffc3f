import json

import pytest

from tchernoff import chernoff as ch
from tchernoff.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, format_bound_table, load_config, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all_and_bogus(capsys):
    code, out, _ = run(capsys, "verify", "all", "--seed", "3")
    assert code == EXIT_OK and json.loads(out)["passed"]
    code, _, _ = run(capsys, "verify", "bogus")
    assert code == EXIT_USAGE


def test_verify_is_deterministic(capsys):
    outs = {run(capsys, "verify", "chernoff", "--seed", "7")[1] for _ in range(2)}
    assert len(outs) == 1


def test_no_command_is_usage_error(capsys):
    assert run(capsys)[0] == EXIT_USAGE


def test_bound_matches_library(capsys):
    code, out, _ = run(capsys, "bound", "--theta", "4", "8", "--kappa", "2", "--k", "1", "--lam-bar", "0.1",
                       "--corollary")
    assert code == EXIT_OK
    prm = ch.BoundParams(kappa=2, k=1, lam_bar=0.1, thetas=(4.0, 8.0))
    pts = ch.main_bound(prm, 2, 2, 1.0)
    cors = [ch.corollary_bound(t, prm, 2, 2, 1.0) for t in prm.thetas]
    assert out == format_bound_table(pts, cors)
    assert out.splitlines()[0].endswith("corollary_printed,corollary_derived")


def test_bound_invalid_k(capsys):
    code, _, err = run(capsys, "bound", "--theta", "1", "--kappa", "2", "--k", "9")
    assert code == EXIT_USAGE and "--k" in err


def test_graph_gen(capsys, tmp_path):
    code, out, err = run(capsys, "graph", "gen", "--graph", "cycle:4")
    assert code == EXIT_OK and out.splitlines()[0] == "4 2" and "lambda=1" in err
    assert run(capsys, "graph", "gen", "--graph", "nope:3")[0] == EXIT_USAGE
    path = tmp_path / "g.txt"
    assert run(capsys, "graph", "gen", "--graph", "complete:4", "--out", str(path))[0] == EXIT_OK
    assert path.read_text().startswith("4 3")


def test_moment_command(capsys):
    code, out, _ = run(capsys, "moment", "--graph", "complete:3", "--kappa", "3", "--seed", "1")
    res = json.loads(out)
    assert code == EXIT_OK and res["passed"] and res["relative_difference"] < 1e-8


def _write(tmp_path, obj):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(obj))
    return str(path)


def test_experiment_outputs(capsys, tmp_path):
    cfg = _write(tmp_path, {"graph": "complete:3", "kappa": 3, "trials": 300,
                            "csv": str(tmp_path / "t.csv"), "json": str(tmp_path / "t.json")})
    code, out, _ = run(capsys, "experiment", cfg, "--seed", "5", "--threads", "2")
    assert code == EXIT_OK and out.startswith("summary: assumption1_violation_rate=")
    rows = (tmp_path / "t.csv").read_text().splitlines()
    assert rows[0] == ch.CSV_HEADER and len(rows) == 11
    assert rows[1].split(",")[1] == "1.00000000e+00"
    data = json.loads((tmp_path / "t.json").read_text())
    assert len(data["rows"]) == 10 and data["summary"]["seed"] == 5


def test_experiment_config_errors(capsys, tmp_path):
    code, _, err = run(capsys, "experiment", _write(tmp_path, {"kappa": 0}))
    assert code == EXIT_USAGE and "'kappa'" in err
    code, _, err = run(capsys, "experiment", _write(tmp_path, {"colour": 1}))
    assert code == EXIT_USAGE and "'colour'" in err
    code, _, err = run(capsys, "experiment", _write(tmp_path, {"thetas": [2, 1]}))
    assert code == EXIT_USAGE and "'thetas'" in err
    code, _, err = run(capsys, "experiment", _write(tmp_path, {"graph": "wheel:3", "trials": 5}))
    assert code == EXIT_USAGE and "'graph'" in err
    code, _, err = run(capsys, "experiment", str(tmp_path / "missing.json"))
    assert code == EXIT_USAGE


def test_config_precedence(tmp_path, monkeypatch):
    path = _write(tmp_path, {"kappa": 3, "trials": 50})
    cfg = load_config(path, {"kappa": 5, "trials": None})
    assert cfg.kappa == 5 and cfg.trials == 50 and cfg.graph == "complete:5"


def test_seed_env_fallback(capsys, tmp_path, monkeypatch):
    cfg = _write(tmp_path, {"graph": "complete:3", "kappa": 3, "trials": 200, "json": str(tmp_path / "o.json"),
                            "csv": str(tmp_path / "o.csv")})
    monkeypatch.setenv("TCHERNOFF_SEED", "42")
    assert run(capsys, "experiment", cfg)[0] == EXIT_OK
    assert json.loads((tmp_path / "o.json").read_text())["summary"]["seed"] == 42
    run(capsys, "experiment", cfg, "--seed", "1")
    assert json.loads((tmp_path / "o.json").read_text())["summary"]["seed"] == 1
    monkeypatch.setenv("TCHERNOFF_SEED", "abc")
    assert run(capsys, "experiment", cfg)[0] == EXIT_USAGE


def test_bound_violation_exit_code(capsys, tmp_path):
    # a deliberately tiny C makes the bound non-vacuous and wrong, which must surface as exit 1
    cfg = _write(tmp_path, {"graph": "cycle:4", "kappa": 2, "trials": 200, "C": 1e-12, "thetas": [0.0]})
    code, out, err = run(capsys, "experiment", cfg, "--seed", "0")
    assert code == EXIT_FAIL and "bound_violations=1" in err
