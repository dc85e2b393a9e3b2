import csv
import io
import json
import math
import subprocess
import sys

import pytest

from gausskuzmin import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_rate_csv(capsys):
    code, out, _ = run(capsys, "rate", "--p", "1", "--p-max", "3")
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header[:6] == ["p", "q_p", "q_err", "lower", "upper", "pass"]
    rows = rows_of(out)
    assert float(rows[0]["q_p"]) < 0.76
    assert float(rows[1]["lower"]) == 0.3 and float(rows[1]["upper"]) == 0.34375
    assert all(r["pass"] == "true" for r in rows)
    assert rows[0]["q_p"] == format(float(rows[0]["q_p"]), ".17g")


def test_rate_asymptotic_column(capsys):
    code, out, _ = run(capsys, "rate", "--p", "1000")
    assert code == 0
    assert abs(float(rows_of(out)[0]["asymptotic_residual"])) <= 1e-4


def test_rate_json_schema(capsys):
    code, out, _ = run(capsys, "rate", "--p", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == cli.SCHEMA_VERSION
    assert doc["rows"][0]["upper"] == 0.34375


def test_iterate_writes_report(tmp_path):
    out = tmp_path / "it.csv"
    code = cli.main(["iterate", "--p", "1", "--n-max", "25", "--out", str(out)])
    assert code == 0
    rows = rows_of(out.read_text())
    assert float(rows[0]["sup_delta"]) == pytest.approx(0.08607, abs=2e-4)
    assert float(rows[-1]["sup_delta"]) <= 1e-11
    last = rows[-1]
    assert abs(float(last["phi(0)"])) <= 1e-12 and abs(float(last["phi(1)"]) - 1) <= 1e-10
    report = json.loads(out.with_suffix(".rate.json").read_text())
    assert report["rate_report"]["fitted_rate"] <= report["rate_report"]["q_p"] + 0.05


def test_iterate_json_embeds_report(capsys):
    code, out, _ = run(capsys, "iterate", "--p", "2", "--n-max", "12", "--grid", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 13
    assert doc["rate_report"]["p"] == 2


def test_montecarlo(capsys):
    code, out, _ = run(capsys, "montecarlo", "--p", "1", "--n", "1", "--x", "0.5", "--samples", "100000")
    assert code == 0
    row = rows_of(out)[0]
    assert float(row["tolerance"]) == pytest.approx(4 / math.sqrt(1e5))
    assert row["pass"] == "true"


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--p", "2", "--x", str(2 / 3), "--n", "3")
    rows = rows_of(out)
    assert code == 0 and rows[0]["digit"] == "3" and float(rows[1]["point"]) == 0.0


def test_byte_identical_outputs(tmp_path):
    paths = [tmp_path / f"mc{i}.csv" for i in range(2)]
    for path in paths:
        cli.main(["montecarlo", "--p", "2", "--n", "3", "--samples", "50000",
                  "--seed", "7", "--workers", "2", "--out", str(path)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as info:
        cli.main(["rate", "--bogus", "1"])
    assert info.value.code != 0


def test_invalid_value_exit_code(capsys):
    code, _, err = run(capsys, "orbit", "--x", "1.5")
    assert code == 2 and "error" in err


def test_verify_fault_injection(capsys, monkeypatch):
    from gausskuzmin import checks

    subset = [c for c in checks.CHECKS if c.name in ("transfer.fixed_point", "measure.normalization")]
    monkeypatch.setattr(checks, "CHECKS", subset)
    code, out, _ = run(capsys, "verify")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--tol", "1e-30")
    rows = rows_of(out)
    assert code == 1
    assert {r["check"] for r in rows if r["pass"] == "false"} == {"transfer.fixed_point", "measure.normalization"}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gausskuzmin", "rate", "--p", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("p,q_p")


@pytest.mark.slow
def test_verify_fresh_checkout(capsys):
    code, out, _ = run(capsys, "verify")
    failed = [r["check"] for r in rows_of(out) if r["pass"] != "true"]
    assert code == 0, failed
