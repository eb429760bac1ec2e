import csv
import io
import json

import pytest

from dombzeta import cli
from dombzeta import exact_sequences as seq


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sequences_csv(capsys):
    code, out, _ = run(capsys, "sequences", "--n-max", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "D_n", "B_n", "B_n/D_n", "wronskian"]
    assert [r["D_n"] for r in rows] == ["1", "4", "28", "256"]
    assert rows[3]["B_n"] == "2368/27"
    assert all(r["wronskian"] == "ok" for r in rows)


def test_sequences_json_and_text(capsys):
    code, out, _ = run(capsys, "sequences", "--n-max", "2", "--format", "json")
    assert code == 0 and json.loads(out)[2]["B_n"] == "9"
    code, out, _ = run(capsys, "sequences", "--n-max", "2", "--format", "text")
    assert code == 0 and "D=28" in out


def test_sequences_exact_failure_exit_code(capsys, monkeypatch):
    bad = seq.WronskianRecord(1, 0)
    monkeypatch.setattr(seq, "wronskian", lambda table, n: bad)
    code, out, _ = run(capsys, "sequences", "--n-max", "2")
    assert code == 2 and "FAIL" in out


@pytest.mark.parametrize("argv", [
    ["sequences", "--format", "xml"],
    ["verify", "--suite", "nope"],
    ["verify", "--n-max", "0"],
    ["verify", "--precision-bits", "32"],
    ["verify", "--trunc", "2"],
    ["series", "zeta"],
    ["frobnicate"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64 and "error" in err


def test_verify_exact_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "exact", "--n-max", "60")
    report = json.loads(out)
    assert code == 0
    assert report["summary"]["fail"] == 0
    assert all(c["exact"] for c in report["checks"])
    assert {"version", "config", "checks", "summary"} <= set(report)
    assert {"check_id", "status", "residual", "tolerance", "params"} <= set(report["checks"][0])


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--suite", "analytic", "--n-max", "60", "--precision-bits", "128", "--tol-digits", "20", "--trunc", "200")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_verify_csv_and_text(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "exact", "--n-max", "40", "--format", "csv")
    assert code == 0 and out.startswith("check_id,status,residual,tolerance,params")
    code, out, _ = run(capsys, "verify", "--suite", "exact", "--n-max", "40", "--format", "text")
    assert code == 0 and out.rstrip().endswith("0 failed")


def test_infeasible_tolerance_fails_loudly(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "analytic", "--n-max", "100",
                       "--tol-digits", "200", "--precision-bits", "128")
    report = json.loads(out)
    assert code == 1
    failed = [c for c in report["checks"] if c["status"] == "fail"]
    assert failed
    assert any("increase truncation" in (c.get("message") or "") for c in failed)


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--n-max", "200", "--precision-bits", "512",
                       "--format", "json")
    assert code == 0
    entries = {e["name"]: e for e in json.loads(out)["constants"]}
    assert set(entries) == {"apery_limit", "domb_sum", "pcf_value"}
    assert all(e["digits_agreement"] >= 100 for e in entries.values())
    assert entries["domb_sum"]["value"].startswith("22.43839")


def test_series_dump(capsys):
    code, out, _ = run(capsys, "series", "xi", "--trunc", "8")
    obj = json.loads(out)
    assert code == 0 and obj["name"] == "xi" and obj["valuation"] == 1
    assert obj["coeffs"][:3] == ["-1/1", "-6/1", "-21/1"]


def test_out_file(capsys, tmp_path):
    path = tmp_path / "seq.csv"
    code, out, _ = run(capsys, "sequences", "--n-max", "2", "--out", str(path))
    assert code == 0 and out == "" and path.read_text().startswith("n,D_n")
