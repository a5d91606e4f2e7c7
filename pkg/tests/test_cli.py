import json
import subprocess
import sys

import pytest

from flatsum.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_flat(capsys):
    code, out, _ = run(capsys, "flat", "--q", "7", "--h", "1")
    assert code == 0
    assert json.loads(out) == {"q": 7, "h": 1, "members": [1, 6]}


def test_flat_csv(capsys):
    code, out, _ = run(capsys, "flat", "--q", "5", "--h", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["q,h,member", "5,2,1", "5,2,2", "5,2,3", "5,2,4"]


def test_flat_fractional_threshold(capsys):
    code, out, _ = run(capsys, "flat", "--q", "17", "--h", "4.25")
    assert code == 0 and len(json.loads(out)["members"]) == 10


def test_verify_symmetry(capsys):
    code, out, err = run(capsys, "verify", "--suite", "symmetry", "--q-max", "100")
    assert code == 0
    obj = json.loads(out)
    assert obj["pass"] is True and obj["max_dev"] < 1e-9
    assert "symmetry: pass" in err


def test_sum_wstar_salie(capsys):
    code, out, _ = run(capsys, "sum", "--kind", "wstar-salie", "--q", "17", "--h", "4")
    assert code == 0
    (row,) = json.loads(out)["results"]
    assert row["re"] == pytest.approx(-4) and row["im"] == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["--kind", "kloosterman", "--q", "5", "--chi", "principal", "--m", "1", "--n", "1"], 0.381966),
        (["--kind", "kloosterman", "--q", "5", "--chi", "jacobi", "--m", "1", "--n", "1"], -3.618034),
        (["--kind", "gauss", "--q", "5", "--chi", "jacobi", "--s", "1"], 2.236068),
        (["--kind", "salie-rhs", "--q", "5", "--m", "1", "--n", "1"], -3.618034),
        (["--kind", "w", "--q", "17", "--chi", "jacobi", "--h", "4"], -6),
        (["--kind", "wstar", "--q", "17", "--chi", "q=17;labels=8", "--h", "4"], -4),
        (["--kind", "wstar-fourier", "--q", "17", "--chi", "index:8", "--h", "4"], -4),
        (["--kind", "tsum", "--q", "15", "--chi", "jacobi", "--m", "1", "--n", "2", "--d", "3"], 0),
    ],
)
def test_sum_kinds(capsys, argv, expected):
    code, out, _ = run(capsys, "sum", *argv)
    assert code == 0
    (row,) = json.loads(out)["results"]
    assert row["re"] == pytest.approx(expected, abs=1e-6)


def test_sum_all_characters(capsys):
    code, out, _ = run(capsys, "sum", "--kind", "w", "--q", "12", "--chi", "all", "--h", "12", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "chi,re,im,abs,term_count" and len(lines) == 5


def test_zhang(capsys):
    code, out, _ = run(capsys, "zhang", "--q", "17", "--delta", "0.25,1")
    assert code == 0
    rows = json.loads(out)["results"]
    assert (rows[0]["count"], rows[0]["main_term"], rows[0]["error"]) == (10, 7.0, 3.0)
    assert rows[1]["error"] == 0


def test_sweep_spot_value(capsys):
    code, out, _ = run(
        capsys, "sweep", "--target", "theorem1", "--q-list", "17", "--h-grid", "4", "--chi", "jacobi"
    )
    assert code == 0
    (rec,) = json.loads(out)["records"]
    assert rec["ratio"] == pytest.approx(0.262, abs=5e-4)


def test_burgess(capsys):
    code, out, _ = run(capsys, "burgess", "--q", "17", "--chi", "jacobi", "--start", "0", "--length", "4", "--r", "1")
    assert code == 0
    assert json.loads(out)["records"][0]["lhs"] == 2


def test_failing_suite_exits_one(capsys):
    code, _, err = run(capsys, "verify", "--suite", "lemma2", "--q-min", "30", "--q-max", "40", "--tol", "1e-30")
    assert code == 1 and "FAIL" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["flat", "--q", "7"],
        ["flat", "--q", "7", "--h", "9"],
        ["flat", "--q", "x", "--h", "1"],
        ["verify", "--suite", "symmetry"],
        ["verify", "--suite", "nope", "--q-max", "5"],
        ["sweep", "--target", "theorem1", "--q-max", "10", "--h-grid", "q/zero"],
        ["sum", "--kind", "kloosterman", "--q", "5", "--chi", "jacobi"],
        ["sum", "--kind", "w", "--q", "5", "--h", "2"],
        ["sum", "--kind", "gauss", "--q", "5", "--chi", "index:9", "--s", "1"],
        ["sum", "--kind", "gauss", "--q", "5", "--chi", "q=7;labels=1", "--s", "1"],
        ["sum", "--kind", "salie-rhs", "--q", "9", "--m", "1", "--n", "1"],
        ["sum", "--kind", "salie-rhs", "--q", "5", "--chi", "principal", "--m", "1", "--n", "1"],
        ["zhang", "--q", "17", "--delta", "1.5"],
        ["burgess", "--q", "9", "--chi", "index:1", "--start", "0", "--length", "3", "--r", "1"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.startswith("flatsum: error:") and err.count("\n") == 1


def test_out_file_and_rerun_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, out, _ = run(capsys, "verify", "--suite", "lemma3", "--q-max", "80", "--format", "csv", "--out", str(path))
        assert code == 0 and out == ""
    assert a.read_bytes() == b.read_bytes()


def test_entry_point_subprocess():
    argv = [sys.executable, "-m", "flatsum", "sweep", "--target", "theorem2", "--q-max", "60"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout and first.stdout
