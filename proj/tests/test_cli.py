"""End-to-end checks of the r1w1 command-line tool (path in $R1W1_CLI)."""

import csv
import io
import json
import os
import subprocess

import pytest

CLI = os.environ.get("R1W1_CLI", "r1w1")


def run(*args, env=None):
    merged = dict(os.environ)
    merged.pop("R1W1_OUT_DIR", None)
    merged.update(env or {})
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=merged)


def test_run_matching_path():
    r = run("run", "--alg", "mmat11", "--graph", "path:3", "--daemon", "scripted:0")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["moves"] == 1
    assert doc["status"] == "legitimate"
    assert doc["final"] == [[1], [0], [None]]
    assert doc["potentials"] == [[0, 0], [1, 0]]
    assert doc["per_rule"]["force-pair"] == 1


def test_run_domination_cycle():
    r = run("run", "--alg", "mkdom11:k=1", "--graph", "cycle:4",
            "--init", "all-ones-correct-counters", "--daemon", "scripted:0,2")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["moves"] == 2
    assert doc["members"] == [1, 3]


def test_run_budget_exhausted():
    r = run("run", "--alg", "mmat11", "--graph", "cycle:5", "--max-moves", "0")
    assert r.returncode == 1
    assert json.loads(r.stdout)["status"] == "budget exhausted"
    assert "budget exhausted" in r.stderr


def test_run_trace_file(tmp_path):
    trace = tmp_path / "t.jsonl"
    r = run("run", "--graph", "path:3", "--daemon", "scripted:0", "--trace", str(trace))
    assert r.returncode == 0
    lines = trace.read_text().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0]) == {"step": 0, "proc": 0, "rule": 2, "witness": 1,
                                    "writes": {"0": {"q": 1}, "1": {"q": 0}}}


def test_verify_all_small_graphs():
    r = run("verify", "--alg", "mmat11", "--graphs", "all-connected:n<=4")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["pass"] and len(doc["reports"]) == 10
    for rep in doc["reports"]:
        assert rep["worst_moves"] <= rep["analytic_bound"]


def test_verify_domination_path():
    r = run("verify", "--alg", "mkdom11:k=1", "--graph", "path:3")
    assert r.returncode == 0
    rep = json.loads(r.stdout)["reports"][0]
    assert rep["worst_moves"] <= 12 and rep["analytic_bound"] == 12


def test_verify_broken_fixture():
    r = run("verify", "--alg", "broken-fixture")
    assert r.returncode == 1
    rep = json.loads(r.stdout)["reports"][0]
    assert not rep["pass"]
    assert "counterexample" in rep["closure"]


def test_verify_cap_refusal():
    r = run("verify", "--graph", "complete:6", "--cap", "100")
    assert r.returncode == 3
    assert "46656" in r.stderr


def test_transform():
    r = run("transform", "--alg", "mmat11", "--graph", "gnp:20:0.2:seed=7", "--K", "2", "--seed", "1")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["converged"] and doc["legitimate"]
    assert doc["exclusion_violations"] == 0
    assert len(doc["per_cycle"]) == doc["cycles"]


def test_fault_drop_window():
    r = run("fault", "--alg", "mmat11", "--graph", "gnp:20:0.2:seed=7",
            "--plan", "drop_all:rounds=post+1..post+10")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["illegitimate_rounds_in_window"] == 0
    assert doc["legitimate"]


def test_fault_corruption():
    r = run("fault", "--alg", "mkdom11:k=1", "--graph", "cycle:9",
            "--plan", "corrupt:ids=2,6:cycle=post")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["reconverged"] and doc["moves_after_faults"] <= doc["bound"]


def test_sweep_moves_linear():
    r = run("sweep", "--alg", "mkdep11:k=0", "--n", "5..40", "--seeds", "50")
    assert r.returncode == 0
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    assert len(rows) == 36 * 50
    assert list(rows[0].keys()) == ["n", "seed", "cycles", "rounds", "bcasts", "moves", "converged"]
    keys = [(int(x["n"]), int(x["seed"])) for x in rows]
    assert keys == sorted(keys)
    assert all(int(x["moves"]) <= 4 * int(x["n"]) for x in rows)


def test_outputs_are_byte_identical(tmp_path):
    a = run("transform", "--graph", "tree:15:seed=2", "--seed", "4", "--out", str(tmp_path / "a.json"))
    b = run("transform", "--graph", "tree:15:seed=2", "--seed", "4", "--out", str(tmp_path / "b.json"))
    assert a.returncode == b.returncode == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_output_directory_from_environment(tmp_path):
    r = run("run", "--graph", "path:3", env={"R1W1_OUT_DIR": str(tmp_path)})
    assert r.returncode == 0
    assert json.loads((tmp_path / "run.json").read_text())["status"] == "legitimate"


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "r1w1.toml"
    cfg.write_text('[run]\nalg = "mkdep11:k=0"\ngraph = "complete:3"\ndaemon = "scripted:2"\n')
    r = run("--config", str(cfg), "run")
    assert r.returncode == 0
    assert json.loads(r.stdout)["members"] == [2]
    r = run("--config", str(cfg), "run", "--daemon", "scripted:1")
    assert json.loads(r.stdout)["members"] == [1]


@pytest.mark.parametrize("args", [
    ["run", "--bogus"],
    ["run", "--alg", "mkdom11:k=0"],
    ["run", "--graph", "hexagon:3"],
    ["transform", "--start-phase", "7"],
    [],
])
def test_usage_errors(args):
    r = run(*args)
    assert r.returncode == 2
