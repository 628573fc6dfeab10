import json
import subprocess
import sys

import pytest

from chardisc.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def haar_csv(tmp_path, capsys):
    path = tmp_path / "haar.csv"
    assert main(["sample", "--group", "A1", "--n", "300", "--seed", "7", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def test_list_groups(capsys):
    code, out, _ = run(["list-groups"], capsys)
    assert code == 0 and "G2" in out and "C_G" in out
    code, out, _ = run(["list-groups", "--json"], capsys)
    rows = {r["group"]: r for r in json.loads(out)["groups"]}
    assert rows["A2"]["|W|"] == 6 and rows["A1"]["C_G"] == pytest.approx(48000 / 3.141592653589793)


def test_sample_kinds(capsys):
    code, out, _ = run(["sample", "--group", "A2", "--n", "3", "--kind", "constant", "--theta", "0.1,0.2"], capsys)
    assert code == 0 and out.count("\n0.10000000000000001,0.20000000000000001") == 3
    code, _, err = run(["sample", "--group", "A2", "--n", "3", "--kind", "constant"], capsys)
    assert code == 1 and "--theta" in err
    code, out, _ = run(["sample", "--group", "A1", "--n", "4", "--kind", "kronecker", "--direction", "3.141592653589793"], capsys)
    assert code == 0 and "provenance=kronecker" in out


def test_usage_errors_exit_1(capsys):
    assert run(["frobnicate"], capsys)[0] == 1
    assert run(["sample", "--group", "E8", "--n", "3"], capsys)[0] == 1
    assert run(["sample", "--group", "A1", "--n", "0"], capsys)[0] == 1
    assert run(["list-groups", "--threads", "0"], capsys)[0] == 1


def test_discrepancy_and_round_trip(haar_csv, capsys):
    argv = ["discrepancy", "--group", "A1", "--seq", str(haar_csv), "--resolution", "20000"]
    code, first, _ = run(argv, capsys)
    assert code == 0
    data = json.loads(first)
    assert data["provenance"]["seed"] == 7 and data["provenance"]["resolution"] == [20000]
    assert data["report"]["d_upper"] == 2 * data["report"]["d_star"]
    _, second, _ = run(argv, capsys)
    assert first == second


def test_verify_and_bound_table(haar_csv, capsys):
    code, out, _ = run(["verify", "--group", "A1", "--seq", str(haar_csv), "--k", "3", "--resolution", "20000"], capsys)
    rep = json.loads(out)["report"]
    assert code == 0 and rep["holds"] is True and rep["degree"] == 5
    code, out, _ = run(["bound-table", "--group", "A1", "--seq", str(haar_csv), "--k-list", "1,3", "--resolution", "20000"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3 and lines[0].startswith("group,n,k")


def test_malformed_csv_is_diagnosed(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("# group=A1\ntheta1\n0.1\nzebra\n")
    code, _, err = run(["discrepancy", "--group", "A1", "--seq", str(bad)], capsys)
    assert code == 1 and "line 4, column 1" in err
    good = tmp_path / "good.csv"
    good.write_text("# group=A1\ntheta1\n0.1\n")
    code, _, err = run(["verify", "--group", "A2", "--seq", str(good), "--k", "1"], capsys)
    assert code == 1 and "requested A2" in err
    code, _, err = run(["verify", "--group", "A1", "--seq", str(tmp_path / "nope.csv"), "--k", "1"], capsys)
    assert code == 1 and "cannot read" in err


def test_candidate_cap_is_validation_error(haar_csv, capsys):
    code, _, err = run(["discrepancy", "--group", "A1", "--seq", str(haar_csv), "--corner-cap", "10", "--resolution", "1000"], capsys)
    assert code == 1 and "cap" in err


def test_kernel_check(capsys):
    code, out, _ = run(["kernel-check", "--group", "A2", "--k", "3,5"], capsys)
    data = json.loads(out)
    assert code == 0 and data["all_hold"] and len(data["checks"]) == 8
    assert run(["kernel-check", "--group", "A1", "--k", "4"], capsys)[0] == 1


def test_intop_check(tmp_path, capsys):
    path = tmp_path / "one.csv"
    main(["sample", "--group", "A1", "--n", "1", "--kind", "constant", "--theta", "1.5707963267948966", "--out", str(path)])
    capsys.readouterr()
    code, out, _ = run(["intop-check", "--group", "A1", "--seq", str(path), "--poly", "x1^2"], capsys)
    rep = json.loads(out)["report"]
    assert code == 0 and rep["rhs"] == pytest.approx(-1.0) and rep["holds"]
    code, _, _ = run(["intop-check", "--group", "A1", "--seq", str(path), "--poly", "x1^2", "--x-resolution", "4", "--tol", "1e-9"], capsys)
    assert code == 2
    code, _, err = run(["intop-check", "--group", "A1", "--seq", str(path), "--poly", "x2"], capsys)
    assert code == 1 and "x2" in err


def test_density_and_chars(capsys):
    code, out, _ = run(["density", "--group", "A1", "--points", "4"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "theta1,P1,F" and len(lines) == 5
    code, out, _ = run(["chars", "--group", "A2", "--weight", "1,0", "--points", "2"], capsys)
    lines = out.strip().splitlines()
    assert lines[0] == "m1,m2,theta1,theta2,re,im,method"
    assert lines[1].startswith("1,0,0,0,3,0,weight_sum")


def test_selftest_subprocess():
    proc = subprocess.run([sys.executable, "-m", "chardisc", "selftest", "--group", "A1"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.count("PASS") >= 5 and "FAIL" not in proc.stdout
