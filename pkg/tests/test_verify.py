from __future__ import annotations

import pytest

from cliffstab.complex import build_torus
from cliffstab.diagop import DiagOp, build_W
from cliffstab.verify import (EXPECTED_ANYONS_2D, anyon_permutation_report, check_boundary_preservation,
                              check_emergent_symmetry, dw_invariance, identity_layer, run_code_switch,
                              table_matches, trivialization_chain, EXPECTED_X_TABLE_2D, EXPECTED_Z_TABLE_2D)


def test_torus_table_and_inverse_table(torus22):
    fwd = check_emergent_symmetry(torus22)
    inv = check_emergent_symmetry(torus22, inverse=True)
    assert fwd.passed and inv.passed
    assert table_matches(fwd, EXPECTED_X_TABLE_2D, EXPECTED_Z_TABLE_2D)
    # V is an involution on colours, so the inverse table is the same map
    assert fwd.details["x_table"] == inv.details["x_table"]


def test_identity_circuit_gives_identity_table(torus22):
    rep = check_emergent_symmetry(torus22, V=identity_layer(torus22), W=DiagOp([]))
    assert rep.passed
    assert all(v == [k] for k, v in rep.details["x_table"].items())
    assert all(v == [k] for k, v in rep.details["z_table"].items())
    anyons = anyon_permutation_report(torus22, V=identity_layer(torus22), symmetry=rep)
    assert all(k == v for k, v in anyons.details["all_rows"].items())


def test_dropping_the_boundary_term_breaks_closure(tri2):
    W = build_W(tri2)
    bulk = DiagOp([t for t in W.terms if t.region == "bulk"])
    rep = check_emergent_symmetry(tri2, W=bulk)
    assert not rep.passed
    assert rep.witnesses and "config" in rep.witnesses[0]


def test_boundary_generator_rb_maps_to_itself(tri2):
    rep = check_emergent_symmetry(tri2)
    assert rep.details["x_table"]["S_X^r S_X^b"] == ["S_X^r S_X^b"]


def test_boundary_preservation_2d_and_3d(tri2, tet1):
    r2 = check_boundary_preservation(tri2)
    assert r2.passed
    assert r2.details["regions"]["L_rb"]["images"] == ["r+b", "r+g+b"]
    r3 = check_boundary_preservation(tet1)
    assert r3.passed
    assert r3.details["regions"]["bdry4"]["images"] == ["r+g+b", "r+g+b+y"]


def test_trivialization_chain_closes_only_at_the_last_layer():
    from cliffstab.code import build_3d_code
    from cliffstab.complex import build_tetrahedron
    rep = trivialization_chain(build_3d_code(build_tetrahedron(2)))
    stages = [s["nonzero_residuals"] for s in rep.details["stages"]]
    assert rep.passed and stages[0] > 0 and stages[-1] == 0


def test_anyon_rows(torus22):
    rep = anyon_permutation_report(torus22)
    assert rep.details["table"] == EXPECTED_ANYONS_2D
    assert rep.details["bijective"]


def test_dw_untwisted_and_representative_shift():
    cx = build_torus([1, 1, 1], "cubical")
    rep = dw_invariance(cx, twisted=False)
    assert rep.passed and rep.details["Z_before"] == rep.details["terms"] == 512
    rep = dw_invariance(cx, gauge_samples=128, seed=3)
    assert rep.details["coboundary_shift_changes"] == 0


def test_code_switch_plus_branch(tri1):
    rep = run_code_switch(tri1, seed=0, force_plus=True)
    assert rep.passed
    assert rep.details["record"]["S_g"] == [1]


def test_code_switch_on_larger_patch(tri2):
    for seed in range(3):
        assert run_code_switch(tri2, seed=seed).passed


def test_code_switch_rejects_closed_code(torus22):
    with pytest.raises(ValueError):
        run_code_switch(torus22)
