"""Command-line interface: exit codes, determinism, outputs."""

import csv
import json
import subprocess
import sys

import pytest

from modestab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_model(capsys):
    code, out, _ = run(capsys, "model", "--d", "5", "--points", "5", "--no-volatile")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "pass" and data["schema_version"]


def test_recurrence_json_and_text(capsys):
    code, out, _ = run(capsys, "recurrence", "--case", "general", "--k", "3", "--lam", "1+2j", "--N", "4")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) >= 4
    code, out, _ = run(capsys, "recurrence", "--case", "k2", "--N", "3", "--emit", "text")
    assert code == 0 and out.strip()


def test_certify_pass_and_markdown(capsys):
    code, out, _ = run(capsys, "certify", "--case", "k2", "--emit", "markdown")
    assert code == 0 and "analyticity" in out


def test_certify_negative_control(capsys):
    code, out, _ = run(capsys, "certify", "--case", "general", "--bound", "C=1/12", "--no-volatile")
    data = json.loads(out)
    assert code == 1 and data["verdict"] == "fail"
    assert "-" in json.dumps(data)


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "--case", "nope"],
        ["scan", "--k", "3", "--d", "5"],
        ["scan", "--k", "3", "--re", "-1:2"],
        ["scan", "--d", "3"],
        ["recurrence", "--N", "0"],
        ["certify", "--bound", "X=1"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_scan_negative_interval_and_csv(capsys, tmp_path):
    path = tmp_path / "pts.csv"
    code, out, _ = run(
        capsys, "scan", "--case", "d3", "--d", "3", "--re", "0:1", "--im", "-1:1", "--step", "0.5", "--nmax", "500",
        "--csv", str(path), "--no-volatile",
    )
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "pass"
    rows = list(csv.reader(path.open()))
    assert len(rows) == 1 + 3 * 5
    assert {r[2] for r in rows[1:]} == {"One"}


def test_no_volatile_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["certify", "--case", "d3", "--no-volatile", "--out", str(p)]) == 0
    assert a.read_text() == b.read_text()
    assert "wall" not in a.read_text()


def test_prove_all_subprocess():
    res = subprocess.run(
        [sys.executable, "-m", "modestab", "prove-all", "--nmax", "300", "--no-volatile"],
        capture_output=True, text=True, timeout=600,
    )
    assert res.returncode == 0, res.stderr
    assert json.loads(res.stdout)["verdict"] == "pass"
