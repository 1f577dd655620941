import json
import subprocess
import sys

import pytest

from hermquat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_gaussian_all_checks(capsys):
    code, out, _ = run(capsys, "verify", "--m", "1", "--ell", "1", "--nmax", "40", "--checks", "all")
    rep = json.loads(out)
    assert code == 0
    assert rep["summary"]["fail"] == "0"
    assert int(rep["summary"]["pass"]) > 100
    rec = rep["records"][0]
    assert set(rec) >= {"check", "params", "lhs", "rhs", "pass"}
    assert isinstance(rec["lhs"], str) and isinstance(rec["pass"], bool)


def test_outside_hypotheses_needs_flag(capsys):
    code, out, err = run(capsys, "verify", "--m", "1", "--ell", "3")
    assert code == 2 and out == ""
    assert "1 mod 4" in err and "--experimental" in err
    code, out, _ = run(capsys, "verify", "--m", "1", "--ell", "3", "--nmax", "12", "--checks", "r-eq-n", "--experimental")
    assert code == 0
    assert json.loads(out)["config"]["experimental"] is True


def test_m2_experimental(capsys):
    code, out, _ = run(capsys, "verify", "--m", "2", "--ell", "1", "--nmax", "15", "--checks", "r-eq-n,zeta-hat", "--experimental")
    rep = json.loads(out)
    assert code == 0
    assert rep["config"]["experimental"] is True
    assert run(capsys, "classes", "--m", "2", "--ell", "1")[0] == 2


@pytest.mark.parametrize("argv", [
    ["classes", "--m", "5", "--ell", "1"],
    ["classes", "--m", "1", "--ell", "0"],
    ["verify", "--m", "1", "--ell", "1", "--checks", "bogus"],
    ["zeta", "--m", "1", "--ell", "1", "--bad-primes", "2,x"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_deterministic_output(capsys, tmp_path):
    argv = ["brandt", "--m", "11", "--ell", "1", "--nmax", "20"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    p = tmp_path / "out.json"
    assert main(argv + ["--out", str(p)]) == 0
    assert p.read_text() == a


def test_subcommands_output(capsys):
    code, out, _ = run(capsys, "classes", "--m", "11", "--ell", "1")
    assert code == 0 and json.loads(out)["data"]
    code, out, _ = run(capsys, "repnums", "--m", "1", "--ell", "1", "--nmax", "10")
    assert code == 0
    code, out, _ = run(capsys, "zeta", "--m", "1", "--ell", "1", "--nmax", "20", "--format", "csv")
    assert code == 0 and out.startswith("check,params,lhs,rhs,pass")


def test_scan_maximality(capsys):
    code, out, _ = run(capsys, "scan-maximality", "--m", "3", "--ell-max", "10")
    rep = json.loads(out)
    assert code == 0
    rows = rep["data"]["grid"]
    assert len(rows) == 10
    assert all(r["maximal"] for r in rows if r["conditions"])
    code, out, _ = run(capsys, "scan-maximality", "--m", "2", "--ell-max", "8", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "m,ell,satisfies_conditions,checker_verdict,agreement" and len(lines) == 9


def test_scan_empty_list(capsys):
    code, out, _ = run(capsys, "scan-maximality", "--m", "")
    rep = json.loads(out)
    assert code == 0
    assert rep["records"] == [] and rep["data"]["grid"] == []


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "hermquat.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.1.0"
