#!/usr/bin/env python3
"""
Test Command Line

Runs the omega-ideals commands in-process and checks the emitted JSON
documents, the exit codes and the CSV traces.
"""

import sys
import json
from pathlib import Path

import pytest

# Add parent directory to path to allow imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent))

from omega_ideals.main import run
from cleanup import list_files_to_clean

DENSITY_ZERO = '{"kind": "densityZero"}'
FIN = '{"kind": "fin"}'
FUBINI = '{"kind": "fubiniEmptyFin"}'
SQUARES = '{"kind": "sparse", "rule": "squares"}'
EVENS = '{"kind": "ap", "a": 0, "d": 2}'
OMEGA = '{"kind": "complement", "arg": {"kind": "finite", "elems": []}}'
NO_CLOSED_FORM = json.dumps({"kind": "complement", "arg": {"kind": "union", "args": [
    {"kind": "ap", "a": 0, "d": 2}, {"kind": "ap", "a": 1, "d": 2}]}})


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    monkeypatch.setenv("OMEGA_IDEALS_LOG_FILE", "")


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_member_command(capsys):
    code, doc = invoke(capsys, "member", "--ideal", DENSITY_ZERO, "--set", SQUARES)
    assert code == 0
    assert doc["verdict"] == "In"
    assert doc["certificate"] == "counting function O(√N)"


def test_dual_member_command(capsys):
    code, doc = invoke(capsys, "member", "--ideal", FIN, "--set", EVENS, "--dual")
    assert code == 0
    assert doc["verdict"] == "Out"


def test_tall_command_reports_the_witness(capsys):
    code, doc = invoke(capsys, "tall", "--ideal", FUBINI)
    assert code == 0
    assert doc["verdict"] == "NotTall"
    assert doc["witness"] == {"kind": "nu2", "k": 0}


def test_tall_witness_is_outside_the_ideal(capsys):
    _, tall = invoke(capsys, "tall", "--ideal", FUBINI)
    code, doc = invoke(capsys, "member", "--ideal", FUBINI, "--set", json.dumps(tall["witness"]))
    assert code == 0
    assert doc["verdict"] == "Out"


def test_output_is_deterministic(capsys):
    run(["tall", "--ideal", DENSITY_ZERO, "--set", EVENS, "--N", "5000", "--rows", "50"])
    first = capsys.readouterr().out
    run(["tall", "--ideal", DENSITY_ZERO, "--set", EVENS, "--N", "5000", "--rows", "50"])
    second = capsys.readouterr().out
    assert first == second


def test_construction_errors_exit_with_four(capsys):
    code, doc = invoke(capsys, "witness-adversary", "--ideal", FIN)
    assert code == 4
    assert doc["error"] == "NotTall"


def test_usage_errors_exit_with_one(capsys):
    code, doc = invoke(capsys, "member", "--ideal", FIN, "--set", EVENS, "--bogus")
    assert code == 1
    assert doc["error"] == "UsageError"


def test_invalid_descriptions_exit_with_two(capsys):
    code, doc = invoke(capsys, "member", "--ideal", '{"kind": "bogus"}', "--set", EVENS)
    assert code == 2
    assert doc["error"] == "InvalidSpec"

    code, _ = invoke(capsys, "member", "--ideal", "no-such-file.json", "--set", EVENS)
    assert code == 2


def test_require_decision(capsys):
    argv = ["member", "--ideal", DENSITY_ZERO, "--set", NO_CLOSED_FORM, "--rows", "50", "--N", "100"]
    code, doc = invoke(capsys, *argv)
    assert code == 0
    assert doc["verdict"] == "Unknown"
    assert len(doc["trace"]) == 50

    code, _ = invoke(capsys, *argv, "--require-decision")
    assert code == 3


def test_density_trace_as_csv(capsys, tmp_path):
    out = tmp_path / "trace.csv"
    code, doc = invoke(capsys, "density", "--ideal", DENSITY_ZERO, "--set", EVENS,
                       "--rows", "4", "--out", str(out))
    assert code == 0
    assert doc["trace"] == [[0, "1"], [1, "1/2"], [2, "2/3"], [3, "1/2"]]
    assert out.read_text().splitlines() == ["n,value", "0,1", "1,1/2", "2,2/3", "3,1/2"]


def test_positive_witness_growth(capsys):
    code, doc = invoke(capsys, "witness-positive", "--set", OMEGA, "--depth", "3")
    assert code == 0
    assert doc["growth"] == [[0, "1"], [1, "2"], [2, "3"], [3, "4"]]
    assert doc["pair"]["B"]["points"] == [0, 1, 2, 3]


def test_positive_witness_from_a_nontall_ideal(capsys):
    code, doc = invoke(capsys, "witness-positive", "--ideal", FUBINI, "--depth", "2")
    assert code == 0
    assert doc["pair"]["B"]["points"] == [0, 1, 3]


def test_fk_classify_command(capsys):
    code, doc = invoke(capsys, "fk-classify", "--ideal", FIN)
    assert code == 0
    assert doc["verdict"] == "admits"


def test_ideal_read_from_a_file(capsys, tmp_path):
    path = tmp_path / "ideal.json"
    path.write_text(DENSITY_ZERO)
    code, doc = invoke(capsys, "member", "--ideal", str(path), "--set", EVENS)
    assert code == 0
    assert doc["verdict"] == "Out"
    assert doc["certificate"] == "AP density 1/d = 1/2 > 0"


def test_cleanup_finds_logs_and_traces(tmp_path):
    log = tmp_path / "debug" / "omega_ideals.log"
    log.parent.mkdir()
    log.write_text("")
    (tmp_path / "debug" / "omega_ideals.log.1").write_text("")
    (tmp_path / "trace.csv").write_text("n,value\n")
    (tmp_path / "README.md").write_text("")
    rotated, trace = str(log) + ".1", str(tmp_path / "trace.csv")

    assert list_files_to_clean(str(log), root=str(tmp_path)) == sorted([str(log), rotated, trace])
    assert list_files_to_clean(str(log), traces=False, root=str(tmp_path)) == [str(log), rotated]
    assert list_files_to_clean("", root=str(tmp_path)) == [trace]


def test_log_file_written_by_a_run_is_found_by_cleanup(capsys, tmp_path, monkeypatch):
    log = tmp_path / "logs" / "run.log"
    monkeypatch.setenv("OMEGA_IDEALS_LOG_FILE", str(log))
    monkeypatch.setenv("OMEGA_IDEALS_LOG_LEVEL", "INFO")
    code, _ = invoke(capsys, "member", "--ideal", FIN, "--set", EVENS)
    assert code == 0
    assert log.read_text()
    assert list_files_to_clean(traces=False) == [str(log)]
