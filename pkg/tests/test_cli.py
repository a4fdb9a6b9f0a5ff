import json
import subprocess
import sys

import pytest

from twistlab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_euler_json(capsys):
    code, out, _ = run(capsys, "euler", "--d", "1", "--p", "13")
    assert code == 0
    rec = json.loads(out)
    assert rec["I"] == [6, 3, 1] and (rec["a1"], rec["a2"]) == (-2, -9)
    assert rec["source"] == "FastTable"
    assert rec["lambda_p"] == pytest.approx(2 / 13**0.5, rel=1e-15)
    code, out, _ = run(capsys, "euler", "--d", "1", "--p", "13", "--oracle")
    orc = json.loads(out)
    assert orc["source"] == "Oracle" and (orc["a1"], orc["a2"]) == (-2, -9)


@pytest.mark.parametrize("argv", [
    ["euler", "--d", "3", "--p", "13"],
    ["euler", "--d", "2", "--p", "5"],
    ["euler", "--d", "1", "--p", "9"],
])
def test_euler_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("twistlab:")


def test_euler_writes_ap_cache(capsys, tmp_path):
    code, _, _ = run(capsys, "euler", "--d", "1", "--p", "13", "--cache-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "ap_E0.csv").read_text() == "p,ap\n13,2"


def test_corrupted_cache_exits_2(capsys, tmp_path):
    (tmp_path / "ap_E0.csv").write_text("p,ap\n13,oops")
    code, _, err = run(capsys, "euler", "--d", "1", "--p", "13", "--cache-dir", str(tmp_path))
    assert code == 2 and ":2:" in err


@pytest.mark.parametrize("argv,lines", [
    (["verify", "tables", "--pmax", "31"], 1 + 9 * (3 + 6)),
    (["verify", "euler", "--dmax", "6", "--pmax", "41"], None),
    (["verify", "conductor", "--dmax", "200"], None),
])
def test_verify_small(capsys, argv, lines):
    code, out, err = run(capsys, *argv)
    assert code == 0
    rows = out.strip().split("\n")
    assert all(r.endswith(",pass") for r in rows[1:])
    if lines:
        assert len(rows) == lines
    assert "checks passed" in err


def test_verify_euler_stores_oracle_data(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "euler", "--dmax", "2", "--pmax", "23",
                     "--cache-dir", str(tmp_path))
    assert code == 0
    text = (tmp_path / "euler_d1.csv").read_text()
    assert text.startswith("p,a1,a2\n5,") and "13,-2,-9" in text


def test_verify_failure_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(cli, "_conductor_rows", lambda d: [(d, 5, 2, 4, False)])
    code, out, _ = run(capsys, "verify", "conductor", "--dmax", "5")
    assert code == 1 and "FAIL" in out


def test_conductor(capsys):
    code, out, _ = run(capsys, "conductor", "--d", "2")
    rec = json.loads(out)
    assert code == 0 and rec["known_part"] == 625 and rec["factors"] == {"5": 4}
    assert rec["bound_used"] * 4 == rec["bound_statement"]
    code, _, _ = run(capsys, "conductor", "--d", "12")
    assert code == 2


def test_density_out_is_byte_identical(capsys, tmp_path):
    out = tmp_path / "r.json"
    argv = ["density", "--xmax", "2000", "--sigma", "0.3", "--out", str(out)]
    assert run(capsys, *argv)[0] == 0
    first = out.read_bytes(), out.with_suffix(".csv").read_bytes()
    assert run(capsys, *argv)[0] == 0
    assert (out.read_bytes(), out.with_suffix(".csv").read_bytes()) == first
    rec = json.loads(first[0])
    assert rec["X"] == 2000 and rec["bound_low"] <= rec["bound_high"]
    assert first[1].decode().startswith("X,sigma,S1,S2,bound_high\n")


def test_density_stdout_formats(capsys):
    code, out, _ = run(capsys, "density", "--xmax", "500", "1000", "--sigma", "0.3")
    assert code == 0 and len(json.loads(out)) == 2
    code, out, _ = run(capsys, "density", "--xmax", "500", "--sigma", "0.3", "--format", "csv")
    assert out.count("\n") == 2


def test_density_unwritable(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "density", "--xmax", "500", "--sigma", "0.3",
                       "--out", str(blocker / "r.json"))
    assert code == 2 and "cannot write" in err


def test_rankbound(capsys):
    code, out, _ = run(capsys, "rankbound", "--xmax", "1000", "--sigma", "0.3")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "X,sigma,bound_low,bound_high,skipped_budget,asymptotic_bound"
    vals = [float(v) for v in row.split(",")]
    assert vals[2] <= vals[3] and vals[5] == pytest.approx(0.25 + 6 / 0.3)


def test_sieve(capsys):
    code, out, _ = run(capsys, "sieve", "--p", "5", "7", "--A", "1,2", "--xmax", "1e4")
    assert code == 0
    rows = out.strip().split("\n")
    assert len(rows) == 3 and rows[1].startswith("5,1 2,")
    assert run(capsys, "sieve", "--p", "6")[0] == 2
    assert run(capsys, "sieve", "--p", "5", "--A", "0")[0] == 2
    assert run(capsys, "sieve", "--p", "5", "--A", "a")[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["density", "--sigma", "1"])
    assert exc.value.code == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "twistlab", "conductor", "--d", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["known_part"] == 1
