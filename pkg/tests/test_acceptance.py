"""Acceptance battery: one test and one PASS/FAIL line per criterion 1-10.

The lines are printed as each test finishes and again in the terminal
summary (see ``conftest.py``), so they survive pytest's output capture.
"""

from __future__ import annotations

import time

from cliffstab import verify
from cliffstab.cli import RunConfig, build_instance
from cliffstab.complex import build_torus

RESULTS: dict = {}


def _record(n: int, ok: bool, note: str):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {note}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def _code(**kw):
    return build_instance(RunConfig(**kw))


def test_criterion_01_logical_t_dagger():
    notes, ok = [], True
    for size in (1, 2):
        t0 = time.perf_counter()
        rep = verify.logical_action(_code(instance="2d", size=size))
        dt = time.perf_counter() - t0
        ok &= rep.passed and rep.details["diagonal_exponents_mod16"] == [0, 14] and dt < 10
        notes.append(f"{rep.instance} diag({', '.join(rep.details['phases'])}) {dt:.2f}s")
    _record(1, ok, "; ".join(notes))


def test_criterion_02_logical_sqrt_t():
    t0 = time.perf_counter()
    rep = verify.logical_action(_code(instance="3d", refinement=1))
    dt = time.perf_counter() - t0
    ok = rep.passed and rep.details["diagonal_exponents_mod16"] == [0, 1] and dt < 60
    _record(2, ok, f"{rep.instance} diag({', '.join(rep.details['phases'])}) {dt:.2f}s")


def test_criterion_03_logical_cs_dagger():
    t0 = time.perf_counter()
    rep = verify.logical_action(_code(instance="bilayer", size=1))
    dt = time.perf_counter() - t0
    ok = rep.passed and rep.details["diagonal_exponents_mod16"] == [0, 0, 0, 12] and dt < 60
    _record(3, ok, f"sectors {rep.details['sectors']} diag({', '.join(rep.details['phases'])}) {dt:.2f}s")


def test_criterion_04_conjugation_closure():
    notes, ok = [], True
    for kw in ({"instance": "torus2d", "size": 2}, {"instance": "2d", "size": 1}, {"instance": "2d", "size": 2}):
        rep = verify.check_emergent_symmetry(_code(**kw))
        xt = {k: v for k, v in verify.EXPECTED_X_TABLE_2D.items() if k in rep.details["x_table"]}
        good = rep.passed and verify.table_matches(rep, xt, verify.EXPECTED_Z_TABLE_2D)
        ok &= good and rep.details["mismatches"] == 0
        notes.append(f"{rep.instance} mismatches={rep.details['mismatches']} over {rep.details['n_configs']} configs")
    _record(4, ok, "; ".join(notes))


def test_criterion_05_anyon_table():
    rep = verify.anyon_permutation_report(_code(instance="torus2d", size=2))
    ok = rep.passed and rep.details["table"] == verify.EXPECTED_ANYONS_2D and len(rep.details["table"]) == 7
    _record(5, ok, ", ".join(f"{k}->{v}" for k, v in rep.details["table"].items()))


def test_criterion_06_gsd():
    t0 = time.perf_counter()
    tw = verify.gsd_report(_code(instance="torus2d", size=2), 22)
    un = verify.gsd_report(_code(instance="torus2d", size=2, untwisted=True), 64)
    dt = time.perf_counter() - t0
    ok = tw.passed and un.passed and dt < 300
    _record(6, ok, f"twisted {tw.details['dimension']}, untwisted {un.details['dimension']} {dt:.2f}s")


def test_criterion_07_cochain_identities():
    rep = verify.cochain_identities(1000, seed=0)
    ok = rep.passed and min(rep.details["cases"].values()) >= 1000 and rep.seconds < 60
    _record(7, ok, f"{min(rep.details['cases'].values())} cases each, failures {sum(rep.details['failures'].values())}, "
                   f"{rep.seconds:.2f}s")


def test_criterion_08_path_integral_invariance():
    notes, ok = [], True
    for dims in ([1, 1, 1], [2, 1, 1]):
        rep = verify.dw_invariance(build_torus(dims, "cubical"))
        ok &= rep.passed
        notes.append(f"{rep.instance}: {rep.details['terms']} terms, Z {rep.details['Z_before']} -> {rep.details['Z_after']}")
    _record(8, ok, "; ".join(notes))


def test_criterion_09_gate_compilation():
    notes, ok = [], True
    for kw in ({"instance": "2d", "size": 1}, {"instance": "2d", "size": 2}, {"instance": "3d", "refinement": 1},
               {"instance": "3d", "refinement": 2}, {"instance": "bilayer", "size": 1},
               {"instance": "torus2d", "size": 2}):
        code = _code(**kw)
        rep = verify.check_gate_compilation(code, samples=10_000, seed=9)
        ok &= rep.passed and rep.details["samples"] == 10_000
        notes.append(f"{code.family}:{code.complex.name}={rep.details['mismatches']}")
    _record(9, ok, "mismatches " + ", ".join(notes))


def test_criterion_10_code_switching():
    code = _code(instance="2d", size=1)
    t0 = time.perf_counter()
    reps = [verify.run_code_switch(code, seed=s) for s in range(100)]
    dt = time.perf_counter() - t0
    fids = {r.details["fidelity"] for r in reps}
    ok = all(r.passed for r in reps) and fids == {"1"} and dt < 120
    _record(10, ok, f"100 seeds, fidelities {sorted(fids)}, global phases "
                    f"{sorted({r.details['global_phase'] for r in reps})}, {dt:.2f}s")
