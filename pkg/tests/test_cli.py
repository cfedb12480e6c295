import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from scipy.stats import spearmanr

from specschrod import cli
from specschrod.diagnostics import orthogonality_deficiency
from specschrod.eig import eig_symmetric
from specschrod.errors import AssemblyError, ConvergenceError


def run(tmp_path, command, config, *flags, out="out"):
    cfg = tmp_path / f"{command}-{abs(hash(json.dumps(config, sort_keys=True)))}.json"
    cfg.write_text(json.dumps(config))
    argv = [command, "--config", str(cfg)]
    if out is not None:
        argv += ["--out", str(tmp_path / out)]
    return cli.main(argv + list(flags))


def table(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def col(rows, name):
    return np.array([float(r[name]) for r in rows])


# solve


def test_solve_harmonic(tmp_path):
    assert run(tmp_path, "solve", {"problem": "harmonic"}) == 0
    rows = table(tmp_path / "out" / "eigenvalues.csv")
    assert len(rows) == 20
    assert [int(r["index"]) for r in rows] == list(range(20))
    np.testing.assert_allclose(col(rows, "re"), 2 * np.arange(20) + 1, atol=1e-8)
    assert np.all(col(rows, "im") == 0)
    assert np.all(col(rows, "residual") <= 1e-10)
    assert {r["real_flag"] for r in rows} == {"true"}
    meta = json.loads((tmp_path / "out" / "meta.json").read_text())
    assert meta["command"] == "solve" and meta["discretization"] == {"n": 200, "c": None, "h": 0.2}
    assert "wall_time" in meta and "created" in meta


def test_solve_coffey_evans_row_20(tmp_path):
    assert run(tmp_path, "solve", {"problem": "coffey_evans", "n": 512, "ne": 201}) == 0
    rows = table(tmp_path / "out" / "eigenvalues.csv")
    assert len(rows) == 201
    assert float(rows[20]["re"]) == pytest.approx(951.8788067966, rel=1e-10)
    assert np.all(col(rows, "residual") <= 1e-8)


def test_solve_hydrogen_ground_state(tmp_path):
    config = {"problem": {"name": "hydrogen", "params": {"l": 1}}, "c": 2, "n": 1024, "ne": 50, "backend": "lapack"}
    assert run(tmp_path, "solve", config) == 0
    rows = table(tmp_path / "out" / "eigenvalues.csv")
    assert float(rows[0]["re"]) == pytest.approx(-0.0625, abs=1e-10)


def test_problem_flag_without_config(tmp_path):
    assert cli.main(["solve", "--problem", "harmonic", "--ne", "5", "--out", str(tmp_path)]) == 0
    assert len(table(tmp_path / "eigenvalues.csv")) == 5


def test_flags_override_config(tmp_path):
    assert run(tmp_path, "solve", {"problem": "harmonic", "ne": 20}, "--n", "120", "--h", "0.25", "--ne", "3") == 0
    meta = json.loads((tmp_path / "out" / "meta.json").read_text())
    assert meta["discretization"]["n"] == 120 and meta["m"] == 120
    assert len(table(tmp_path / "out" / "eigenvalues.csv")) == 3


# drift


def test_drift_coffey_evans(tmp_path):
    assert run(tmp_path, "drift", {"problem": "coffey_evans", "n": [256, 512], "ne": 100}) == 0
    rows = table(tmp_path / "out" / "drift.csv")
    assert len(rows) == 100
    assert {r["parameter"] for r in rows} == {"n"}
    assert {(r["alpha1"], r["alpha2"]) for r in rows} == {("256", "512")}
    assert np.max(col(rows, "delta_abs")) < 1e-9
    assert not (tmp_path / "out" / "drift_exact.csv").exists()


def test_drift_identical_parameters_is_zero(tmp_path):
    assert run(tmp_path, "drift", {"problem": "coffey_evans", "n": [128, 128], "ne": 50}) == 0
    rows = table(tmp_path / "out" / "drift.csv")
    assert len(rows) == 50 and np.all(col(rows, "delta_abs") == 0.0)


def test_drift_against_exact(tmp_path):
    assert run(tmp_path, "drift", {"problem": "harmonic", "h": [0.2, 0.25], "ne": 20}) == 0
    assert table(tmp_path / "out" / "drift.csv")[0]["parameter"] == "h"
    rows = table(tmp_path / "out" / "drift_exact.csv")
    assert len(rows) == 40
    assert np.max(col(rows, "delta")) <= 1e-8


def test_drift_hydrogen_grows_with_index(tmp_path):
    config = {"problem": "hydrogen", "n": [1600, 2048], "ne": 50, "backend": "lapack"}
    assert run(tmp_path, "drift", config) == 0
    d = col(table(tmp_path / "out" / "drift.csv"), "delta_abs")
    assert len(d) == 50
    assert spearmanr(np.arange(50), d).correlation > 0.8
    assert np.median(d[-10:]) > 100 * np.median(d[:10])
    exact = table(tmp_path / "out" / "drift_exact.csv")
    assert float(exact[0]["exact"]) == -0.0625


def test_sweep_c(tmp_path):
    assert run(tmp_path, "sweep-c", {"problem": "coulomb_decay", "n": 128, "c": [1, 2, 4], "ne": 10}) == 0
    rows = table(tmp_path / "out" / "sweep.csv")
    assert [(float(r["c1"]), float(r["c2"])) for r in rows] == [(1.0, 2.0), (2.0, 4.0)]
    assert all(float(r["max_abs_drift"]) >= float(r["median_abs_drift"]) >= 0 for r in rows)


# coefficients and orthogonality


def test_coeffs_coffey_evans(tmp_path):
    assert run(tmp_path, "coeffs", {"problem": "coffey_evans", "n": 512, "modes": [0, 1, 2, 3]}) == 0
    plateau = table(tmp_path / "out" / "plateau.csv")
    assert [int(r["mode"]) for r in plateau] == [0, 1, 2, 3]
    assert np.all(col(plateau, "plateau") <= 1e-14)
    coeffs = table(tmp_path / "out" / "coeffs.csv")
    assert len(coeffs) == 4 * 512
    assert np.all(col(coeffs, "abs_coeff") >= 0)


def test_coeffs_hydrogen_mode_zero(tmp_path):
    config = {"problem": "hydrogen", "n": 1600, "modes": [0], "backend": "lapack"}
    assert run(tmp_path, "coeffs", config) == 0
    plateau = table(tmp_path / "out" / "plateau.csv")
    assert float(plateau[0]["eigenvalue"]) == pytest.approx(-0.0625, abs=1e-10)
    assert float(plateau[0]["plateau"]) <= 1e-12


def test_coeffs_constant_debug_vector(tmp_path):
    assert run(tmp_path, "coeffs", {"problem": "coffey_evans", "n": 64, "ne": 10, "debug_vector": "constant"}) == 0
    a = col(table(tmp_path / "out" / "coeffs.csv"), "abs_coeff")
    assert a.size == 64
    assert a[0] == pytest.approx(1.0, abs=1e-15)
    assert np.max(a[1:]) <= 1e-15


def test_coeffs_mode_out_of_range(tmp_path, capsys):
    assert run(tmp_path, "coeffs", {"problem": "harmonic", "ne": 5, "modes": [5]}) == 2
    assert "modes" in capsys.readouterr().err


def test_orth_anharmonic(tmp_path):
    config = {"problem": "anharmonic", "ne": 200, "reference_index": 0}
    assert run(tmp_path, "orth", config) == 0
    rows = table(tmp_path / "out" / "orth.csv")
    assert [int(r["j"]) for r in rows] == list(range(1, 200))
    assert np.max(col(rows, "deficiency")) <= 1e-12


def test_orth_harmonic(tmp_path):
    assert run(tmp_path, "orth", {"problem": "harmonic"}) == 0
    assert np.max(col(table(tmp_path / "out" / "orth.csv"), "deficiency")) <= 1e-12


def test_orth_symmetric_toy_is_exactly_zero():
    sol = eig_symmetric(np.diag([2.0, 1.0]))
    assert np.all(orthogonality_deficiency(sol.vectors, 0) == 0.0)


def test_orth_reference_out_of_range(tmp_path):
    assert run(tmp_path, "orth", {"problem": "harmonic", "ne": 5, "reference_index": 5}) == 2


# determinism and output location


def test_csv_byte_determinism(tmp_path):
    config = {"problem": "coffey_evans", "n": 96, "ne": 40, "outputs": ["coeffs", "orthogonality"]}
    assert run(tmp_path, "solve", config, out="a") == 0
    assert run(tmp_path, "solve", config, out="b") == 0
    names = sorted(p.name for p in (tmp_path / "a").glob("*.csv"))
    assert names == ["coeffs.csv", "eigenvalues.csv", "orth.csv", "plateau.csv"]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    drift = {"problem": "harmonic", "n": [150, 200], "ne": 20}
    assert run(tmp_path, "drift", drift, out="c") == 0
    assert run(tmp_path, "drift", drift, out="d") == 0
    for name in ("drift.csv", "drift_exact.csv"):
        assert (tmp_path / "c" / name).read_bytes() == (tmp_path / "d" / name).read_bytes()


def test_output_dir_precedence(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = {"problem": "harmonic", "ne": 2, "output_dir": "from_config"}
    assert run(tmp_path, "solve", config, out=None) == 0
    assert (tmp_path / "from_config" / "eigenvalues.csv").exists()
    monkeypatch.setenv(cli.ENV_OUT, str(tmp_path / "from_env"))
    assert run(tmp_path, "solve", config, out=None) == 0
    assert (tmp_path / "from_env" / "eigenvalues.csv").exists()
    assert run(tmp_path, "solve", config, out="from_flag") == 0
    assert (tmp_path / "from_flag" / "eigenvalues.csv").exists()


# errors and exit codes


@pytest.mark.parametrize(
    "config, field",
    [
        ({"problem": "harmonic", "colour": "red"}, "colour"),
        ({"problem": "nonexistent"}, "problem"),
        ({"problem": "harmonic", "method": "ChC"}, "method"),
        ({"problem": "harmonic", "n": 2}, "n"),
        ({"problem": "harmonic", "n": "many"}, "n"),
        ({"problem": "hydrogen", "c": -1}, "c"),
        ({"problem": "harmonic", "outputs": ["plots"]}, "outputs"),
        ({"problem": "harmonic", "n": [100, 200]}, "n"),
        ({"problem": "harmonic", "ne": 0}, "ne"),
    ],
)
def test_usage_errors_name_the_field(tmp_path, capsys, config, field):
    assert run(tmp_path, "solve", config) == 2
    err = capsys.readouterr().err
    assert err.startswith("specschrod: error[usage-error]:")
    assert field in err


def test_two_parameter_lists_rejected(tmp_path, capsys):
    assert run(tmp_path, "drift", {"problem": "hydrogen", "n": [64, 128], "c": [1, 2]}) == 2
    assert "only one of" in capsys.readouterr().err


def test_drift_needs_two_values(tmp_path):
    assert run(tmp_path, "drift", {"problem": "coffey_evans", "n": 64}) == 2


def test_sweep_c_only_for_half_line(tmp_path):
    assert run(tmp_path, "sweep-c", {"problem": "harmonic"}) == 2


def test_missing_or_bad_config(tmp_path):
    assert cli.main(["solve"]) == 2
    assert cli.main(["solve", "--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["solve", "--config", str(bad)]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_convergence_error_identifies_case(tmp_path, monkeypatch, capsys):
    def stuck(op, cfg):
        raise ConvergenceError("Francis QR did not converge for eigenvalue 7", index=7)

    monkeypatch.setattr(cli, "solve", stuck)
    assert run(tmp_path, "solve", {"problem": "coffey_evans", "n": 32}) == 4
    err = capsys.readouterr().err
    assert "error[convergence-error]" in err and "coffey_evans" in err and "n=32" in err


def test_assembly_error_exit_code(tmp_path, monkeypatch):
    def broken(*args, **kwargs):
        raise AssemblyError("potential is not finite at interior node 3")

    monkeypatch.setattr(cli, "assemble", broken)
    assert run(tmp_path, "solve", {"problem": "harmonic"}) == 3


def test_list_problems(capsys):
    assert cli.main(["list-problems"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["name"] for r in rows} >= {"coffey_evans", "hydrogen", "anharmonic"}


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "specschrod.cli", "list-problems"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["name"] == "coffey_evans"
    proc = subprocess.run([sys.executable, "-m", "specschrod.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
