import subprocess
import sys
from pathlib import Path

import pytest

from localview.cli import EXIT_FAILURE, EXIT_GUARD, EXIT_OK, EXIT_PARSE, main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_verdicts(capsys):
    code, out, _ = run(capsys, "classify", str(SCENARIOS / "diagonal.yaml"))
    assert code == EXIT_OK and out.count("OneToMany") == 3
    assert "universally optimal strategy EXISTS" in out
    code, out, _ = run(capsys, "classify", str(SCENARIOS / "many_to_one.yaml"))
    assert "Other" in out and "DOES NOT EXIST" in out
    code, out, _ = run(capsys, "classify", str(SCENARIOS / "fully_connected.yaml"))
    assert "universally optimal strategy EXISTS" in out


def test_simulate_reports_qualifier(capsys):
    code, out, _ = run(capsys, "simulate", str(SCENARIOS / "many_to_one.yaml"))
    assert code == EXIT_OK
    assert "oracle sum 2 (linear single-shot)" in out


def test_simulate_csv_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "simulate", str(SCENARIOS / "two_blocks.yaml"), "--csv", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "scenario_label,component_id,classification,distributed_sum,oracle_sum,gap,verdict"
    assert len(lines) == 4


def test_view_command(capsys):
    code, out, _ = run(capsys, "view", str(SCENARIOS / "two_blocks.yaml"), "T1")
    assert code == EXIT_OK and "3 of 8 links" in out
    code, out, _ = run(capsys, "view", str(SCENARIOS / "two_blocks.yaml"), "R3", "--genie")
    assert "genie connectivity" in out


def test_oracle_command_shows_guard(capsys):
    code, out, _ = run(capsys, "oracle", str(SCENARIOS / "fully_connected.yaml"))
    assert code == EXIT_OK and "guard:" in out and "sum rate 4 (linear single-shot)" in out


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("K: 2\nlinks:\n  - [1, 1, 1]\n  - [1, 3, 1]\n")
    code, _, err = run(capsys, "simulate", str(bad))
    assert code == EXIT_PARSE and "links[1] (line 4)" in err
    assert run(capsys, "classify", str(tmp_path / "missing.yaml"))[0] == EXIT_PARSE
    assert run(capsys, "view", str(SCENARIOS / "diagonal.yaml"), "Q1")[0] == EXIT_PARSE


def test_guard_exit_code(tmp_path, capsys):
    big = tmp_path / "big.yaml"
    big.write_text("K: 1\nlinks: [[1, 1, 7]]\n")
    code, _, err = run(capsys, "oracle", str(big))
    assert code == EXIT_GUARD and "warning" in err
    assert run(capsys, "sweep", "--class", "a", "--gain-bound", "4")[0] == EXIT_GUARD


def test_sweep_command(capsys):
    code, out, _ = run(capsys, "sweep", str(SCENARIOS / "one_to_many.yaml"))
    assert code == EXIT_OK and "gains 0..3" in out and "max gap 0" in out
    code, out, _ = run(capsys, "sweep", "--class", "e", "--gain-bound", "1")
    assert code == EXIT_OK and "DOES NOT EXIST" in out
    assert run(capsys, "sweep")[0] == EXIT_PARSE


def test_counterexample_command_subset(capsys):
    code, out, _ = run(capsys, "counterexamples", "e", "m", "-v")
    assert code == EXIT_OK and "2/2 replays pass" in out and "d. positive gap: ok" in out


def test_counterexample_failure_exit_code(capsys):
    code, out, _ = run(capsys, "counterexamples", "h")
    assert code == EXIT_FAILURE and "FAIL" in out


def test_enumerate_command(capsys):
    code, out, _ = run(capsys, "enumerate-topologies")
    assert code == EXIT_OK and "16 classes covering 64 labelled topologies" in out


def test_search_command(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "search-universal", "--class", "e", "--class", "a", "--csv", str(path))
    assert code == EXIT_OK and "genie on" in out
    rows = path.read_text().splitlines()[1:]
    assert rows == ["(e),1,12 32,,,,DOES NOT EXIST", "(a),1,-,,,,EXISTS"]
    code, out, _ = run(capsys, "search-universal", "--class", "e", "--no-genie")
    assert "genie off" in out
    assert run(capsys, "search-universal")[0] == EXIT_PARSE


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_worker_pool_keeps_order(capsys, jobs):
    code, out, _ = run(capsys, "search-universal", "--class", "f", "--class", "b", "--jobs", jobs)
    assert out.index("(f)") < out.index("(b)")


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "localview.cli", "enumerate-topologies"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "16 classes" in proc.stdout
