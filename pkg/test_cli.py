"""测试命令行入口"""
import csv
import json

import pytest

from main import parse_and_dispatch, resolve_seed
from src.core.errors import ConfigurationError
from src.harness.reports import CSV_COLUMNS

CI_FLAGS = ["--family", "powerlaw", "--rho-coeff", "0.5", "--rho-exp", "1", "--delta-coeff", "1", "--delta-exp", "1"]

SWEEP_CONFIG = {
    "family": {"kind": "powerlaw", "rho_coeff": {"re": 0.5}, "rho_exp": 1, "delta_coeff": {"re": 1.0}, "delta_exp": 1},
    "test_points": [{"c1": {"re": 0.5}, "c2": {"re": 0.2}}],
    "envelope_budget": 1,
    "resolution": 64,
}


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("PLURIGREEN_SEED", "PLURIGREEN_WORKERS", "PLURIGREEN_DB_URL"):
        monkeypatch.delenv(name, raising=False)


def write_config(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_classify_complete_intersection(capsys):
    assert parse_and_dispatch(["classify", *CI_FLAGS]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["regime"] == "CompleteIntersection"
    assert data["m"]["re"] == pytest.approx(-2.0, abs=1e-6)


def test_classify_writes_output_file(tmp_path, capsys):
    out = tmp_path / "classification.json"
    assert parse_and_dispatch(["classify", *CI_FLAGS, "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["regime"] == "CompleteIntersection"


def test_generators(capsys):
    assert parse_and_dispatch(["generators", "--eps", "0.01", "--rho", "0.005", "--delta", "0.001"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [g["name"] for g in data["triple_ideal"]["generators"]] == ["Q1", "Q2", "Q3"]
    assert len(data["lines"]) == 3
    assert data["maximal_square"]["label"] == "MaximalSquare"


def test_bounds_are_sandwich_consistent(capsys):
    argv = ["bounds", "--eps", "0.01", "--rho", "0.005", "--delta", "0.001", "--z", "0.5,0,0.2,0", "--budget", "1"]
    assert parse_and_dispatch(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sandwich_ok"]
    bounds = data["bounds"]
    assert bounds["lower"]["value"] <= bounds["upper_envelope"]["value"] + 1e-9
    assert bounds["upper_envelope"]["value"] <= bounds["upper_two_point"]["value"] + 1e-9


# argv, 期望退出码
error_cases = [
    (["bounds", "--eps", "0.01", "--rho", "0.005", "--delta", "0.001", "--z", "1.5,0,0.2,0"], 3),
    (["bounds", "--eps", "0.7", "--rho", "0.005", "--delta", "0.001", "--z", "0.5,0,0.2,0"], 2),
    (["bounds", "--eps", "0.01", "--rho", "0.005", "--delta", "0.001", "--z", "0.5,0"], 2),
    (["generators", "--rho", "0.005", "--delta", "0.001"], 2),
    (["classify", *CI_FLAGS, "--schedule", "0.1,0.01"], 2),
    (["classify", *CI_FLAGS, "--seed", "-1"], 2),
    (["sweep", "--workers", "0"], 2),
    (["unknown"], 2),
]


@pytest.mark.parametrize("argv, code", error_cases)
def test_exit_codes(argv, code):
    assert parse_and_dispatch(argv) == code


def test_help_exits_zero(capsys):
    assert parse_and_dispatch(["--help"]) == 0


def test_sweep_with_malformed_config_writes_nothing(tmp_path):
    config = write_config(tmp_path / "bad.json", {**SWEEP_CONFIG, "unknown_key": 1})
    code = parse_and_dispatch(["sweep", "--config", config, "--output", str(tmp_path / "out")])
    assert code == 2
    assert sorted(p.name for p in tmp_path.iterdir()) == ["bad.json"]


def test_sweep_with_unparseable_config(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert parse_and_dispatch(["sweep", "--config", str(path)]) == 2
    assert parse_and_dispatch(["sweep", "--config", str(tmp_path / "missing.json")]) == 2


def test_sweep_writes_files_and_archives(tmp_path, capsys):
    config = write_config(tmp_path / "sweep.json", SWEEP_CONFIG)
    prefix, db = tmp_path / "result", tmp_path / "runs.db"
    code = parse_and_dispatch(["sweep", "--config", config, "--output", str(prefix), "--db", str(db)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["rows"] == 5
    assert summary["regime"] == "CompleteIntersection"

    with open(f"{prefix}.csv", encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 6
    report = json.loads((tmp_path / "result.json").read_text(encoding="utf-8"))
    assert report["settings"]["seed"] == 0

    assert parse_and_dispatch(["runs", "--db", str(db)]) == 0
    runs = json.loads(capsys.readouterr().out)
    assert [r["id"] for r in runs] == [summary["run_id"]]
    assert parse_and_dispatch(["runs", "--db", str(db), "--id", str(summary["run_id"])]) == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 5


def test_seed_precedence(monkeypatch):
    assert resolve_seed(None) == 0
    assert resolve_seed(None, 3) == 3
    monkeypatch.setenv("PLURIGREEN_SEED", "5")
    assert resolve_seed(None, 3) == 5
    assert resolve_seed(9, 3) == 9
    monkeypatch.setenv("PLURIGREEN_SEED", "five")
    with pytest.raises(ConfigurationError):
        resolve_seed(None)


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = {"passed": False, "seconds": 0.0, "checks": [{"name": "sandwich", "passed": False, "detail": {}}]}
    monkeypatch.setattr("src.tools.command_tools.run_verification", lambda quick, seed: failing)
    assert parse_and_dispatch(["verify", "--quick"]) == 4
    assert json.loads(capsys.readouterr().out)["checks"][0]["name"] == "sandwich"
