import json
import os

import numpy as np
import pytest

from hydrostat import cli, metrics
from hydrostat.solver import UNBALANCED, WELL_BALANCED


def test_run_config_defaults():
    cfg = cli.RunConfig(experiment="atmosphere_perturbed")
    assert cfg.scheme == WELL_BALANCED
    assert cfg.amplitude == 1e-7
    assert cfg.t_end == 0.2
    assert cfg.dim == 1
    cfg2 = cli.RunConfig(experiment="polytrope")
    assert cfg2.t_end == 30.0
    assert cfg2.amplitude == 0.0
    assert cfg2.dim == 2


def test_run_config_validation():
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(experiment="tornado")
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(experiment="atmosphere", scheme="magic")
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(experiment="atmosphere", resolutions=(2,))
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(experiment="atmosphere", cfl=1.5)
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(experiment="blast", amplitude=1.0)
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(experiment="atmosphere", t_end=-1.0)


def test_scheme_aliases_and_both():
    cfg = cli.RunConfig(experiment="atmosphere", scheme="wb")
    assert cfg.scheme == WELL_BALANCED
    both = cli.RunConfig(experiment="atmosphere", scheme="both")
    assert both.schemes == (WELL_BALANCED, UNBALANCED)


def test_parse_config_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[run]\nexperiment = atmosphere\nscheme = unbalanced\n"
                    "resolutions = 8, 16\nt_end = 0.01\n")
    cfg = cli.parse_config(str(path))
    assert cfg.experiment == "atmosphere"
    assert cfg.scheme == UNBALANCED
    assert cfg.resolutions == (8, 16)
    assert cfg.t_end == 0.01


def test_parse_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[run]\nexperiment = atmosphere\ncolour = blue\n")
    with pytest.raises(cli.ConfigError):
        cli.parse_config(str(path))
    with pytest.raises(cli.ConfigError):
        cli.parse_config(str(tmp_path / "missing.ini"))
    with pytest.raises(cli.ConfigError):
        cli.parse_config(None, {})


def test_parse_config_overrides_win(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[run]\nexperiment = atmosphere\nt_end = 5\n")
    cfg = cli.parse_config(str(path), {"t_end": 0.5, "scheme": "wb"})
    assert cfg.t_end == 0.5
    assert cfg.scheme == WELL_BALANCED


def test_make_state_shapes():
    s1 = cli.make_state("atmosphere", 16, WELL_BALANCED)
    assert s1.u.shape == (3, 16)
    s2 = cli.make_state("polytrope", 8, UNBALANCED)
    assert s2.u.shape == (4, 8, 8)
    s3 = cli.make_state("blast", 8, WELL_BALANCED)
    assert np.all(s3.u[3] >= s2.u[3] - 1e-12)


def test_equilibrium_averages_strip_perturbation():
    eq = cli.equilibrium_averages("atmosphere_perturbed", 16)
    pert = cli.make_state("atmosphere_perturbed", 16, WELL_BALANCED,
                          amplitude=1e-3).u
    assert np.max(np.abs(pert[2] - eq[2])) > 1e-5
    assert np.allclose(pert[0], eq[0])


def test_reference_config_mapping():
    cfg = cli.reference_config("atmosphere_perturbed", 1e-7, 0.2)
    assert cfg.geometry == "planar" and cfg.scheme == UNBALANCED
    cfg2 = cli.reference_config("polytrope_perturbed", 1e-2, 0.2)
    assert cfg2.geometry == "cylindrical" and cfg2.scheme == WELL_BALANCED
    with pytest.raises(cli.ConfigError):
        cli.reference_config("blast", None, 0.02)


def test_write_error_table(tmp_path):
    path = tmp_path / "errors.csv"
    cli.write_error_table(str(path), (32, 64),
                          {"wb": np.array([1.0, 0.125])})
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "N,err_wb,rate_wb"
    assert lines[1].startswith("32,")
    assert lines[1].endswith(",nan")
    assert float(lines[2].split(",")[2]) == pytest.approx(3.0)


def test_cmd_run_writes_artifacts(tmp_path):
    cfg = cli.RunConfig(experiment="atmosphere", scheme="wb",
                        resolutions=(8,), t_end=0.01,
                        out=str(tmp_path / "out"))
    assert cli.cmd_run(cfg) == 0
    snap = tmp_path / "out" / "snapshot_well_balanced_N8.csv"
    manifest = tmp_path / "out" / "manifest.json"
    assert snap.exists() and manifest.exists()
    data = json.loads(manifest.read_text())
    assert data["config"]["experiment"] == "atmosphere"
    assert snap.name in data["artifacts"]
    assert data["diagnostics"]["well_balanced_N8"]["steps"] >= 1
    rows = [l for l in snap.read_text().splitlines()
            if not l.startswith("#")]
    assert len(rows) == 8


def test_cmd_convergence_equilibrium_errors(tmp_path):
    cfg = cli.RunConfig(experiment="atmosphere", scheme="both",
                        resolutions=(8, 16), t_end=0.01,
                        out=str(tmp_path / "conv"))
    assert cli.cmd_convergence(cfg) == 0
    table = (tmp_path / "conv" / "errors.csv").read_text().splitlines()
    header = table[0].split(",")
    assert header == ["N", "err_well_balanced", "rate_well_balanced",
                      "err_unbalanced", "rate_unbalanced"]
    row16 = table[2].split(",")
    assert float(row16[1]) < 1e-12  # wb holds the equilibrium
    assert float(row16[3]) > float(row16[1])


def test_main_reports_config_errors(tmp_path, capsys):
    code = cli.main(["run", "--experiment", "blast", "--amplitude", "2.0",
                     "--out", str(tmp_path)])
    assert code == 1
    assert "amplitude" in capsys.readouterr().err


def test_main_run_smoke(tmp_path):
    code = cli.main(["run", "--experiment", "atmosphere", "--scheme", "wb",
                     "--resolutions", "8", "--t-end", "0.005",
                     "--out", str(tmp_path / "smoke")])
    assert code == 0
    assert (tmp_path / "smoke" / "manifest.json").exists()
