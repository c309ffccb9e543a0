import json
import os
import subprocess
import sys
from fractions import Fraction as F

import pytest

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "meanmedian.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd or PKG_ROOT,
    )


def test_traj_exact_output():
    r = run_cli("traj", "7/12")
    assert r.returncode == 0
    assert r.stdout.strip() == '{"L":9,"m":"1"}'


def test_traj_half():
    r = run_cli("traj", "1/2")
    assert r.returncode == 0
    assert r.stdout.strip() == '{"L":4,"m":"1/2"}'


def test_traj_10_19():
    r = run_cli("traj", "10/19")
    assert r.returncode == 0
    assert r.stdout.strip() == '{"L":47,"m":"217/152"}'


def test_traj_emit_points():
    r = run_cli("traj", "7/12", "--emit-points")
    obj = json.loads(r.stdout)
    assert obj["x"] == "7/12"
    assert obj["points"] == ["0", "7/12", "1", "3/4", "1", "7/6", "13/8", "15/8", "1"]
    assert obj["medians"] == ["7/12", "2/3", "3/4", "7/8", "1", "1"]


@pytest.mark.parametrize("bad", ["0.5", "5/4", "abc", "1/0", "0", "1"])
def test_traj_usage_errors(bad):
    assert run_cli("traj", bad).returncode == 2


def test_traj_not_terminated_exit_code():
    r = run_cli("--threshold", "8", "traj", "7/12")
    assert r.returncode == 3
    assert json.loads(r.stdout)["terminated"] is False


def test_threshold_env_override():
    r = run_cli("traj", "7/12", env_extra={"MMM_THRESHOLD": "8"})
    assert r.returncode == 3
    # explicit flag wins over the environment
    r = run_cli("--threshold", "10000", "traj", "7/12", env_extra={"MMM_THRESHOLD": "8"})
    assert r.returncode == 0


def test_sweep_requires_stop_condition(tmp_path):
    r = run_cli("sweep", "--seed", "1/2", "--direction", "right")
    assert r.returncode == 2


def test_sweep_writes_stream_and_summary(tmp_path):
    out = tmp_path / "pieces.jsonl"
    r = run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "5", "--out", str(out))
    assert r.returncode == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6  # seed singleton + 5 atoms
    first = json.loads(lines[0])
    assert first["kind"] == "singleton"
    summary = json.loads(r.stdout)
    assert summary["atoms"] == 5
    assert summary["subintervals"][0] == {"start": "1/2", "end": "1/2", "L": 4, "atoms": 0}
    assert summary["subintervals"][1]["start"] == "1/2"
    assert summary["subintervals"][1]["L"] == 73
    assert (tmp_path / "pieces.jsonl.journal").exists()


def test_sweep_stdout_mode():
    r = run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "2")
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert len(lines) == 4  # singleton + 2 atoms + summary
    assert json.loads(lines[-1])["atoms"] == 2


def test_sweep_resume_journal_mismatch(tmp_path):
    out = tmp_path / "pieces.jsonl"
    run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "3", "--out", str(out))
    r = run_cli(
        "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "4",
        "--out", str(out), "--resume",
    )
    assert r.returncode == 2


def test_sweep_resume_after_simulated_crash(tmp_path):
    out_ref = tmp_path / "ref.jsonl"
    ref = run_cli(
        "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "12",
        "--with-driving", "--out", str(out_ref),
    )
    assert ref.returncode == 0

    out = tmp_path / "crash.jsonl"
    crashed = run_cli(
        "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "12",
        "--with-driving", "--out", str(out), "--abort-after-pieces", "5",
    )
    assert crashed.returncode == 9
    assert not out.read_text().endswith("\n")  # torn final line on disk

    resumed = run_cli(
        "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "12",
        "--with-driving", "--out", str(out), "--resume",
    )
    assert resumed.returncode == 0
    assert out.read_bytes() == out_ref.read_bytes()
    assert resumed.stdout == ref.stdout


def test_sweep_resume_right_after_a_singleton(tmp_path):
    # piece 1 of this sweep is the seed singleton; a crash between it and the
    # first atom must not duplicate it on resume
    out_ref = tmp_path / "ref.jsonl"
    ref = run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "3",
                  "--out", str(out_ref))
    assert ref.returncode == 0
    out = tmp_path / "crash.jsonl"
    crashed = run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "3",
                      "--out", str(out), "--abort-after-pieces", "1")
    assert crashed.returncode == 9
    resumed = run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "3",
                      "--out", str(out), "--resume")
    assert resumed.returncode == 0
    assert out.read_bytes() == out_ref.read_bytes()


def test_corners_command():
    r = run_cli(
        "corners", "--seed", "1/2", "--direction", "right", "--max-atoms", "4",
    )
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["corners"] == []
    assert len(obj["segments"]) == 1
    assert obj["segments"][0]["m"] == {"a": "333/8", "b": "-325/16"}


def test_sigma_command(tmp_path):
    out = tmp_path / "pieces.jsonl"
    run_cli(
        "sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "6",
        "--with-driving", "--out", str(out),
    )
    r = run_cli("sigma", "--in", str(out), "--subinterval", "1")
    assert r.returncode == 0
    rows = [json.loads(line) for line in r.stdout.splitlines()]
    assert rows[0] == {"j": 1, "cycles": [[72, 73]]}
    assert rows[1] == {"j": 2, "cycles": [[71, 72]]}
    # the singleton subinterval has no transitions
    r = run_cli("sigma", "--in", str(out), "--subinterval", "0")
    assert r.returncode == 0 and r.stdout == ""


def test_sigma_requires_driving(tmp_path):
    out = tmp_path / "bare.jsonl"
    run_cli("sweep", "--seed", "1/2", "--direction", "right", "--max-atoms", "3", "--out", str(out))
    r = run_cli("sigma", "--in", str(out), "--subinterval", "1")
    assert r.returncode == 2


def test_verify_paper_on_reduced_fixture_file(tmp_path):
    fixtures = {
        "intervals": [
            {"name": "around-10/19", "anchor": "10/19", "side": "interval",
             "lo": "841/1598", "hi": "639/1214",
             "m": {"a": "141/4", "b": "-137/8"}, "expected_L": 47, "tier": "quick"},
            {"name": "skipped-long", "anchor": "1/2", "side": "right",
             "lo": "1/2", "hi": "2911001/5684610",
             "m": {"a": "333/8", "b": "-325/16"}, "expected_L": None, "tier": "long"},
        ],
        "corners": [
            {"name": "corner:7/12", "point": "7/12",
             "left": {"a": "-213", "b": "501/4"}, "right": {"a": "219", "b": "-507/4"}},
        ],
        "corner_alternatives": [],
    }
    path = tmp_path / "fixtures.json"
    path.write_text(json.dumps(fixtures))
    r = run_cli("verify-paper", "--fixtures", str(path), "--tier", "quick")
    assert r.returncode == 0
    lines = [json.loads(x) for x in r.stdout.splitlines()]
    by_name = {x["fixture"]: x for x in lines if "fixture" in x}
    assert by_name["around-10/19"]["status"] == "pass"
    assert by_name["skipped-long"]["status"] == "skip"
    assert by_name["corner:7/12"]["status"] == "pass"
    assert lines[-1]["fail"] == 0


def test_verify_paper_reports_failure(tmp_path):
    fixtures = {
        "intervals": [],
        "corners": [
            {"name": "corner:bogus", "point": "1/3",
             "left": {"a": "-213", "b": "501/4"}, "right": {"a": "219", "b": "-507/4"}},
        ],
    }
    path = tmp_path / "fixtures.json"
    path.write_text(json.dumps(fixtures))
    r = run_cli("verify-paper", "--fixtures", str(path))
    assert r.returncode == 5
