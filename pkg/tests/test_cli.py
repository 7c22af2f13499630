from __future__ import annotations

import json

import pytest

from cliffstab.cli import main


def _run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr()


def test_logical_action_prints_tdagger(capsys):
    rc, cap = _run(capsys, "logical-action", "--instance", "2d", "--size", "1")
    assert rc == 0
    assert "diag(1, e^{-iπ/4})" in cap.out and "PASS" in cap.out


def test_gsd_prints_22(capsys, tmp_path):
    out = tmp_path / "g.json"
    rc, cap = _run(capsys, "gsd", "--instance", "torus2d", "--size", "2", "--out", str(out))
    assert rc == 0 and cap.out.splitlines()[0] == "22"
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1 and rep["passed"]


def test_dump_circuit_json(capsys):
    rc, cap = _run(capsys, "dump-circuit", "--instance", "2d", "--size", "2", "--op", "W")
    gates = json.loads(cap.out.splitlines()[0])
    assert rc == 0
    assert {g["gate"] for g in gates} == {"CS", "CS†", "T†"}


def test_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["code-switch", "--seed", "4", "--count", "3", "--out", str(p)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_config_errors_exit_2(tmp_path, capsys):
    assert main(["gsd", "--instance", "2d"]) == 2
    assert main(["build", "--instance", "nope"]) == 2
    assert main(["build", "--size", "0"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"instance": "2d", "colour": 3}))
    assert main(["build", "--config", str(bad)]) == 2
    capsys.readouterr()


def test_config_file_supersedes_flags(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"instance": "3d", "refinement": 1}))
    rc, cap = _run(capsys, "logical-action", "--instance", "2d", "--config", str(cfg))
    assert rc == 0 and "e^{iπ/8}" in cap.out


def test_failing_experiment_exits_1_with_witness_file(tmp_path, capsys, monkeypatch):
    from cliffstab import verify
    real = verify.logical_action
    monkeypatch.setattr(verify, "logical_action", lambda code: real(code, expected=[0, 2]))
    out = tmp_path / "la.json"
    rc, _ = _run(capsys, "logical-action", "--out", str(out))
    assert rc == 1
    assert json.loads((tmp_path / "la.json.witness.json").read_text())["witnesses"]


@pytest.mark.parametrize("cmd", ["build", "check-stabilizers", "check-symmetry", "anyons"])
def test_other_subcommands_pass(cmd, capsys):
    inst = "torus2d" if cmd == "anyons" else "2d"
    rc, _ = _run(capsys, cmd, "--instance", inst, "--size", "2")
    assert rc == 0


def test_dw_subcommand(capsys):
    rc, cap = _run(capsys, "dw", "--instance", "torus3d", "--dims", "1,1,1")
    assert rc == 0 and "Z before 176, after 176" in cap.out


def test_suite_manifest_lists_every_criterion(tmp_path, capsys):
    out = tmp_path / "suite.json"
    rc, _ = _run(capsys, "suite", "--experiments", "c5,c6", "--out", str(out))
    rep = json.loads(out.read_text())
    assert rc == 0
    assert [m["id"] for m in rep["manifest"]] == ["c5", "c6"]
