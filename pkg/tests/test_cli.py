import json
import subprocess
import sys

import pytest

from suspopt import study as st
from suspopt.cli import main
from suspopt.io import read_columns

TOML = """
[road]
length = 200.0
[operating]
fn_grid = [1.5]
[optimizer]
population = 10
max_iter = 2
[contour]
resolution = 11
[transient]
designs = [[0.3, 0.3], [0.2, 0.6]]
[realizations]
n_seeds = 2
"""


@pytest.fixture
def cfg(tmp_path):
    p = tmp_path / "study.toml"
    p.write_text(TOML)
    return p


def run(cfg, out, *args):
    return main([args[0], "--config", str(cfg), "--out", str(out), *args[1:]])


def test_sweep(cfg, tmp_path, capsys):
    out = tmp_path / "sweep"
    assert run(cfg, out, "sweep", "--preset", "min_rft", "--seed", "3") == 0
    cols, prov = read_columns(out / "sweep.csv")
    assert list(cols["preset"]) == ["min_rft"] and prov["seed"] == 3
    assert (out / "traces" / "trace_fn1.5_min_rft_seed3.csv").exists()
    assert "min_rft" in capsys.readouterr().out


def test_sweep_failure_exit_code(cfg, tmp_path, monkeypatch):
    def failing(study, seed=None):
        cell = st.SweepCell(f_n=1.5, preset="min_sigma", seed=0, error="boom")
        return st.StudyResult([cell], st.provenance(study))

    monkeypatch.setattr(st, "run_optimization_sweep", failing)
    assert run(cfg, tmp_path / "f", "sweep") == 1
    assert (tmp_path / "f" / "summary.json").exists()


def test_contour(cfg, tmp_path):
    out = tmp_path / "contour"
    assert run(cfg, out, "contour", "--no-settling", "--fn", "1.25") == 0
    cols, prov = read_columns(out / "contour_fn1.25.csv")
    assert cols["zeta_n"].size == 121 and prov["f_n"] == 1.25
    summary = json.loads((out / "summary.json").read_text())
    assert summary["missing_cells"] == 0


def test_transient(cfg, tmp_path, capsys):
    out = tmp_path / "tr"
    assert run(cfg, out, "transient", "--excitation", "step") == 0
    summary = json.loads((out / "summary.json").read_text())
    assert len(summary["designs"]) == 2
    assert summary["provenance"]["config"]["transient"]["kind"] == "step"
    assert run(cfg, tmp_path / "tr2", "transient", "--design", "0.1,0.9") == 0
    assert len(json.loads((tmp_path / "tr2" / "summary.json").read_text())["designs"]) == 1


def test_realizations(cfg, tmp_path):
    out = tmp_path / "real"
    assert run(cfg, out, "realizations", "--n-seeds", "1", "--preset", "min_sigma") == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["summary"][0]["zeta_n_std"] is None


@pytest.mark.parametrize("excitation", ["road", "bump", "flat"])
def test_simulate(cfg, tmp_path, excitation):
    out = tmp_path / excitation
    assert run(cfg, out, "simulate", "--excitation", excitation, "--road-class", "C", "--speed", "30") == 0
    cols, prov = read_columns(out / "timeseries.csv")
    assert prov["excitation"] == excitation
    assert prov["config"]["road"]["class"] == "C"
    assert {"t", "a_s", "f_t", "x_s", "x_u"} <= set(cols)


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[road]\nclass = 'Q'\n")
    assert main(["sweep", "--config", str(bad)]) == 2
    assert main(["sweep", "--config", str(tmp_path / "missing.toml")]) == 2
    assert main(["simulate", "--fn", "3.0", "--out", str(tmp_path)]) == 2
    assert main(["simulate", "--design", "1.5,0.2", "--out", str(tmp_path)]) == 2
    assert "error" in capsys.readouterr().err


def test_transient_without_designs(tmp_path):
    assert main(["transient", "--out", str(tmp_path)]) == 2


def test_bad_design_argument():
    with pytest.raises(SystemExit):
        main(["simulate", "--design", "0.3"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "suspopt", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for cmd in ("sweep", "contour", "transient", "realizations", "simulate"):
        assert cmd in proc.stdout
