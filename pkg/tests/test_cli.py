import json

import pytest

from main import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from tests.conftest import CONFIG_DIR


@pytest.fixture
def short_config(fig1_config_data, tmp_path):
    data = dict(fig1_config_data, path_count=3)
    data["grid"] = {"t_end": 1.0, "dt": 1e-3, "record_every": 50}
    path = tmp_path / "short.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def test_thresholds(capsys, tmp_path):
    code = main(["thresholds", "--config", str(CONFIG_DIR / "fig1.json"), "--out", str(tmp_path / "out")])
    assert code == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["extinction_holds"] is True
    assert report["ext_rhs"] == pytest.approx(337.1125)
    assert (tmp_path / "out" / "thresholds.json").exists()


def test_zero_sigma_thresholds_print_inf(fig1_config_data, capsys, tmp_path):
    data = dict(fig1_config_data, params=dict(fig1_config_data["params"], sigma=0.0))
    path = tmp_path / "still.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["thresholds", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["ext_lhs"] == "inf"


def test_simulate_is_byte_identical(short_config, capsys, tmp_path):
    for run in ("a", "b"):
        assert main(["simulate", "--config", short_config, "--seed", "7", "--out", str(tmp_path / run)]) == EXIT_OK
    a = (tmp_path / "a" / "trajectory_seed7.csv").read_bytes()
    b = (tmp_path / "b" / "trajectory_seed7.csv").read_bytes()
    assert a == b
    assert a.startswith(b"t,S,I,C,A,N\n")
    printed = capsys.readouterr().out
    assert '"clamp_count"' in printed


def test_simulate_with_svg_and_json_tables(short_config, tmp_path):
    out = tmp_path / "out"
    assert main(["simulate", "--config", short_config, "--svg", "--format", "json", "--out", str(out)]) == EXIT_OK
    assert (out / "trajectory_seed42.json").exists()
    assert (out / "trajectory_seed42.svg").read_text(encoding="utf-8").startswith("<?xml")


def test_ensemble(short_config, capsys, tmp_path):
    out = tmp_path / "out"
    assert main(["ensemble", "--config", short_config, "--paths", "2", "--svg", "--out", str(out)]) == EXIT_OK
    verdicts = json.loads(capsys.readouterr().out)
    assert verdicts["path_count"] == 2
    report = json.loads((out / "ensemble_report.json").read_text(encoding="utf-8"))
    assert report["seed"] == 42
    assert len(report["extinction"]) == 2
    assert (out / "ensemble_stats.csv").exists()
    assert (out / "ensemble.svg").exists()


def test_ode(short_config, capsys, tmp_path):
    assert main(["ode", "--config", short_config, "--out", str(tmp_path / "out")]) == EXIT_OK
    final = json.loads(capsys.readouterr().out)
    assert set(final) == {"s", "i", "c", "a"}
    assert (tmp_path / "out" / "ode.csv").exists()


def test_missing_config_flag(capsys):
    assert main(["simulate"]) == EXIT_CONFIG
    assert "--config" in capsys.readouterr().err


def test_invalid_config(fig1_config_data, capsys, tmp_path):
    data = dict(fig1_config_data, levy={"marks": [{"jump_size": 0.01, "rate": 1.0}]})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["ensemble", "--config", str(path)]) == EXIT_CONFIG
    assert "levy" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["thresholds", "--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG


def test_runtime_failure(fig1_config_data, tmp_path):
    data = dict(fig1_config_data, initial={"s": 1e308, "i": 1e308, "c": 0, "a": 0})
    data["grid"] = {"t_end": 0.01, "dt": 1e-3, "record_every": 1}
    path = tmp_path / "blowup.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_RUNTIME


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["plot"])
