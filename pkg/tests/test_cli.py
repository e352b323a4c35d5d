import json
import subprocess
import sys

import pytest

from heunfg import elliptic as ell
from heunfg.cli import fmt_float, fmt_rational, main, parse_path


def run(capsys, *argv, env=None):
    code = main(list(argv), env=env or {})
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "--l", "2,0,0,0")
    rec = json.loads(out)
    assert code == 0
    assert rec["branch_points"] == ["5/1", "-2/1", "-3/1"]
    assert rec["genus"] == 2 and rec["in_registry"] is True
    assert rec["H"][1] == ["-15/1", "1/1"]


def test_tables_deterministic(capsys):
    a = run(capsys, "tables", "--l", "2,1,1,0")[1]
    b = run(capsys, "tables", "--l", "2,1,1,0")[1]
    assert a == b


def test_tables_csv_and_text(capsys):
    code, out, _ = run(capsys, "tables", "--l", "1,0,0,0", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "field,index,power_of_E,coefficient"
    assert "Q,,3,1/1" in lines
    code, out, _ = run(capsys, "tables", "--l", "1,0,0,0", "--format", "text")
    assert out.startswith("couplings 1,0,0,0") and "genus 1" in out


@pytest.mark.parametrize("argv", [
    ["tables", "--l", "0,0,0,0"],
    ["tables", "--l", "1,2,3"],
    ["tables", "--l", "a,b,c,d"],
    ["tables", "--l", "1,0,0,0", "--branch-points", "1,2,3"],
    ["tables", "--l", "1,0,0,0", "--branch-points", "1,1,-2"],
    ["tables", "--l", "13,0,0,0"],
    ["tables", "--l", "1,0,0,0", "--tol", "-1"],
    ["sweep", "--l", "1,0,0,0", "--path", "0,1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("heunfg: error:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["tables", "--l", "1,0,0,0", "--format", "xml"])
    assert exc.value.code == 2


def test_half_periods_recover_branch_points(capsys):
    L = ell.lattice_from_branch_points(5, -2, -3)
    w1, w3 = L.omega1, L.omega3
    hp = f"{w1.real!r},{w1.imag!r},{w3.real!r},{w3.imag!r}"
    code, out, _ = run(capsys, "tables", "--l", "1,0,0,0", f"--half-periods={hp}")
    assert code == 0 and json.loads(out)["branch_points"] == ["5/1", "-2/1", "-3/1"]


def test_irrational_half_periods_rejected(capsys):
    code, _, err = run(capsys, "tables", "--l", "1,0,0,0", "--half-periods", "1,0,0,1.3")
    assert code == 2 and "rational" in err


def test_environment_and_precedence(capsys):
    env = {"HEUN_LATTICE": "7,-1,-6"}
    rec = json.loads(run(capsys, "tables", "--l", "1,0,0,0", env=env)[1])
    assert rec["branch_points"] == ["7/1", "-1/1", "-6/1"]
    rec = json.loads(run(capsys, "tables", "--l", "1,0,0,0", "--branch-points", "4,-1,-3", env=env)[1])
    assert rec["branch_points"] == ["4/1", "-1/1", "-3/1"]
    code, out, _ = run(capsys, "verify", "--l", "1,0,0,0", "--suite", "covering",
                       env={"HEUN_TOL": "1e-40"})
    assert code == 1 and json.loads(out)["pass"] is False
    code, _, _ = run(capsys, "verify", "--l", "1,0,0,0", "--suite", "covering", "--tol", "1e-8",
                     env={"HEUN_TOL": "1e-40"})
    assert code == 0


def test_verify_formats(capsys):
    code, out, _ = run(capsys, "verify", "--l", "2,0,0,0", "--suite", "reduction")
    rec = json.loads(out)
    assert code == 0 and rec["pass"]
    assert {g["gate"] for g in rec["gates"]} >= {"hermite_xi", "first_kind_grid"}
    code, out, _ = run(capsys, "verify", "--l", "1,1,0,0", "--suite", "monodromy", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "suite,gate,value,threshold,pass"
    code, out, _ = run(capsys, "verify", "--l", "1,0,0,0", "--format", "text")
    assert code == 0 and out.rstrip().endswith("all gates passed")


def test_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--l", "2,1,0,0", "--path=-10-2i,10+3i,4")
    recs = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(recs) == 4
    assert all(r["residuals"]["wp_alpha"] < 1e-8 for r in recs)
    assert run(capsys, "sweep", "--l", "2,1,0,0", "--path", "0,1,0") == (0, "", "")
    target = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sweep", "--l", "1,0,0,0", "--path", "1i,2i,2", "--format", "csv",
                       "--out", str(target))
    assert code == 0 and out == "" and target.read_text().count("\n") == 3


def test_sweep_nudges_off_band_edges(capsys):
    code, out, err = run(capsys, "sweep", "--l", "2,0,0,0", "--path", "15,15,1")
    rec = json.loads(out)
    assert code == 0 and rec["nudged"] and "warning" in err


def test_large_energy_asymptotics(capsys):
    rec = json.loads(run(capsys, "sweep", "--l", "2,0,0,0", "--path", "1e6i,1e6i,1")[1])
    wp = complex(*rec["wp_alpha"])
    E = complex(*rec["E"])
    assert abs(wp * 36 / (-4 * E) - 1) < 0.01


def test_formatting():
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(float("nan")) == "null"
    from fractions import Fraction
    assert fmt_rational(Fraction(5)) == "5/1" and fmt_rational(Fraction(-3, 4)) == "-3/4"
    assert parse_path("1+2i,-3j,5") == (1 + 2j, -3j, 5)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heunfg", "tables", "--l", "1,0,0,0"],
                          capture_output=True, text=True, env={"PATH": "/usr/bin"})
    assert proc.returncode == 0 and json.loads(proc.stdout)["genus"] == 1
