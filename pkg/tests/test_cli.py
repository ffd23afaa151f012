"""Command-line client: every subcommand, file output, exit codes."""

import json

import pytest
from click.testing import CliRunner

from stackmmp.cli import main
from stackmmp.fans import BUILTIN_FANS


@pytest.fixture
def runner():
    return CliRunner()


def test_check_fan(runner):
    res = runner.invoke(main, ["check-fan", "--fan", "P2"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["valid"] is True


def test_check_fan_from_file(runner, tmp_path):
    p = tmp_path / "fan.json"
    p.write_text(BUILTIN_FANS["P1xP1"].to_json())
    res = runner.invoke(main, ["check-fan", "--fan", str(p)])
    assert res.exit_code == 0, res.output


def test_check_fan_invalid_exits_nonzero(runner, tmp_path):
    p = tmp_path / "half.json"
    p.write_text(json.dumps(
        {"dim": 1, "rays": [[1]], "mult": [1], "max_cones": [[0]]}
    ))
    res = runner.invoke(main, ["check-fan", "--fan", str(p)])
    assert res.exit_code == 1


def test_unknown_fan_message(runner):
    res = runner.invoke(main, ["walls", "--fan", "NOPE"])
    assert res.exit_code != 0
    assert "neither a built-in fan nor an existing file" in res.output


def test_walls(runner):
    res = runner.invoke(main, ["walls", "--fan", "P2"])
    assert res.exit_code == 0
    assert len(json.loads(res.output)["walls"]) == 3


def test_mmp_trace(runner, tmp_path):
    trace = tmp_path / "trace.json"
    res = runner.invoke(main, ["mmp", "--fan", "F1", "--trace", str(trace)])
    assert res.exit_code == 0, res.output
    steps = json.loads(trace.read_text())["steps"]
    assert [s["kind"] for s in steps] == ["divisorial", "fano"]


def test_cohom(runner):
    res = runner.invoke(main, ["cohom", "--fan", "P2", "--k", "0,0,-3"])
    assert res.exit_code == 0
    assert json.loads(res.output)["dims"] == [0, 0, 1]


def test_cohom_bad_k(runner):
    res = runner.invoke(main, ["cohom", "--fan", "P2", "--k", "a,b,c"])
    assert res.exit_code != 0


def test_collection_verify_pipeline(runner, tmp_path):
    coll_file = tmp_path / "coll.json"
    res = runner.invoke(
        main, ["collection", "--fan", "P2", "--out", str(coll_file)]
    )
    assert res.exit_code == 0, res.output
    res = runner.invoke(
        main, ["verify", "--fan", "P2", "--collection", str(coll_file)]
    )
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["pipeline", "--fan", "P1xP1"])
    assert res.exit_code == 0, res.output
    assert "violations: 0" in res.output


def test_flip_guard_env(runner, monkeypatch):
    monkeypatch.setenv("TEXC_FLIP_GUARD", "0")
    res = runner.invoke(main, ["mmp", "--fan", "FLIP3"])
    assert res.exit_code != 0
    assert "flip guard" in res.output
    # explicit flag overrides the environment
    res = runner.invoke(
        main, ["mmp", "--fan", "FLIP3", "--flip-guard", "10"]
    )
    assert res.exit_code == 0, res.output


def test_flip_guard_env_malformed(runner, monkeypatch):
    monkeypatch.setenv("TEXC_FLIP_GUARD", "many")
    res = runner.invoke(main, ["mmp", "--fan", "FLIP3"])
    assert res.exit_code != 0
    assert "must be an integer" in res.output


def test_verify_detects_reordered(runner, tmp_path):
    coll_file = tmp_path / "coll.json"
    res = runner.invoke(
        main, ["collection", "--fan", "P2", "--out", str(coll_file)]
    )
    assert res.exit_code == 0
    doc = json.loads(coll_file.read_text())
    doc["collection"]["objects"].reverse()
    coll_file.write_text(json.dumps(doc))
    res = runner.invoke(
        main, ["verify", "--fan", "P2", "--collection", str(coll_file)]
    )
    assert res.exit_code == 1
