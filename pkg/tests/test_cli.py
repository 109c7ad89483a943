import json
import subprocess
import sys

import jsonschema
import pytest

from cli_cases import SEEDED_COMMANDS
from preserver_lab.cli import dispatch, main
from preserver_lab.io import load_report_schema

SCHEMA = load_report_schema()


def run(argv):
    code, text = dispatch(argv)
    return code, json.loads(text), text


def strip_timing(text):
    report = json.loads(text)
    report.pop("timing")
    return json.dumps(report, sort_keys=True)


@pytest.mark.parametrize("argv", SEEDED_COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_reports_validate(argv):
    _, report, _ = run(argv)
    jsonschema.validate(report, SCHEMA)
    assert report["command"] == argv[0]


@pytest.mark.parametrize("argv", SEEDED_COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_reports_replay(argv):
    assert strip_timing(dispatch(argv)[1]) == strip_timing(dispatch(argv)[1])


def test_schur_example():
    code, report, _ = run(["schur", "-n", "0,2,4", "-u", "1,1,1"])
    assert code == 0
    assert report["results"]["tableaux"] == report["results"]["bialternant"] == "8"
    assert report["results"]["equal"] is True


def test_threshold_example():
    _, report, _ = run(["threshold", "--sharp", "-n", "0,1", "-c", "1,1", "-M", "2", "--rho", "1"])
    assert report["results"]["value"] == 5.0
    assert report["results"]["formula"] == "SharpC"


def test_certify_exit_codes():
    assert run(["certify", "-f", "1 + x - 0.2*x^2", "-N", "2", "--rho", "1", "--samples", "500"])[0] == 0
    code, report, _ = run(["certify", "-f", "1 + x - 0.21*x^2", "-N", "2", "--rho", "1", "--samples", "500"])
    assert code == 1 and report["results"]["verdict"] == "Falsified"


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(["schur", "-n", "0,2,4", "-u", "1,1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        dispatch(["threshold", "--sharp", "-n", "0,1", "-c", "1,1", "-M", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        dispatch(["nonsense"])
    assert exc.value.code == 2


def test_seed_from_environment(monkeypatch):
    argv = ["hciz", "--alpha", "0,1", "-x", "0,1", "--samples", "1000"]
    monkeypatch.setenv("PRESERVER_LAB_SEED", "17")
    _, report, _ = run(argv)
    assert report["seed"] == 17
    assert report["results"] == run(argv + ["--seed", "17"])[1]["results"]


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["tn", "--moments", "1,2,5", "--out", str(out)]) == 0
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)


def test_matrix_file_inputs(tmp_path):
    csv = tmp_path / "a.csv"
    csv.write_text("1/4,1/8\n1/8,1/16\n")
    _, report, _ = run(["threshold", "--rayleigh", str(csv), "-n", "0,1", "-c", "1,1", "-M", "2"])
    assert report["results"]["value"] == pytest.approx(0.578125, rel=1e-12)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "preserver_lab", "counterexample", "--two-sided", "-k", "1", "-t", "1", "--rho", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["results"]["quadratic_form"] == -4
