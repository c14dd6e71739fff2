import subprocess
import sys

import pytest

from iqdyn.cli import _theta, main
from iqdyn.pipeline import read_csv


def test_theta_parsing():
    assert _theta("pi") == pytest.approx(3.141592653589793)
    assert _theta("pi/2") == pytest.approx(1.5707963267948966)
    assert _theta("0.5*pi") == pytest.approx(1.5707963267948966)
    assert _theta(0.3) == 0.3


def test_evolve(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('channel = "dephasing"\nstatistics = "boson"\ntheta = "pi"\n'
                   'indistinguishability = 1.0\nt_max = 5.0\nsamples = 6\n')
    assert main(["evolve", str(cfg)]) == 0
    meta, header, data = read_csv(tmp_path / "run.csv")
    assert len(data) == 6 and abs(data[:, 6] - 1).max() < 1e-10


def test_sweep(tmp_path):
    cfg = tmp_path / "sweep.toml"
    cfg.write_text('channel = "depolarizing"\nstatistics = "fermion"\npoints = 5\n')
    out = tmp_path / "s.csv"
    assert main(["sweep", str(cfg), "--out", str(out)]) == 0
    _, header, data = read_csv(out)
    assert header == ["I", "l2", "C", "P_LR"] and len(data) == 5


def test_figure(tmp_path):
    assert main(["figure", "2b", "--out", str(tmp_path)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fig2b_boson.csv", "fig2b_fermion.csv"]


@pytest.mark.parametrize("argv", [
    ["figure", "9z"],
    ["evolve", "does-not-exist.toml"],
    ["validate", "--cases", "0"],
    ["validate", "--channel", "bitflip"],
    ["frobnicate"],
])
def test_bad_input_exit_code(argv, capsys):
    assert main(argv) == 2


def test_bad_config_exit_code(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text('channel = "amplitude_damping"\nstatistics = "fermion"\nl = 1.0\nlprime = 1.0\n'
                   'initial_state = "two"\nt_max = 1.0\n')
    assert main(["evolve", str(cfg)]) == 2
    cfg.write_text("channel = [unterminated\n")
    assert main(["evolve", str(cfg)]) == 2


def test_validate_exit_codes(monkeypatch, capsys):
    assert main(["validate", "--seed", "3", "--cases", "3"]) == 0
    assert "PASS" in capsys.readouterr().out
    from iqdyn import cli, pipeline
    real = pipeline.run_validate

    def failing(*a, **kw):
        report = real(*a, **kw)
        report.tol = 0.0
        report.cases[0].population_deviation = 1.0
        return report

    monkeypatch.setattr(cli, "run_validate", failing)
    assert main(["validate", "--cases", "1"]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "iqdyn", "validate", "--cases", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "PASS" in out.stdout
