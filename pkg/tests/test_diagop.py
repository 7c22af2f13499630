from __future__ import annotations

import numpy as np
import pytest

from cliffstab.complex import build_torus
from cliffstab.diagop import (DiagOp, build_V, build_W, build_W_generalN, compile_to_gates, gates_json,
                              gate_summary, alpha_terms)
from cliffstab.sim import sector_representative
from cliffstab.verify import check_alpha_descent, check_gate_compilation, compare_alpha_with_W


def test_v_2d_images(tri1):
    V = build_V(tri1)
    xi, zi = V.x_image(), V.z_image()
    r, g, b = range(3)
    assert list(xi[:, r]) == [1, 1, 0]
    assert list(xi[:, b]) == [0, 1, 1]
    assert list(zi[:, g]) == [1, 1, 1]
    assert np.array_equal(V.color_map() @ V.color_map() % 2, np.eye(3, dtype=int))


def test_v_3d_maps_zy_to_all_colors(tet1):
    zi = build_V(tet1).z_image()
    assert list(zi[:, tet1.colors.index("y")]) == [1, 1, 1, 1]


def test_w_vanishes_on_zero_config(tri1, tet1, bilayer1):
    for code in (tri1, tet1, bilayer1):
        assert build_W(code).compile(code)(0) == 0


def test_w3d_fires_only_hinge_on_logical_one(tet1):
    W = build_W(tet1)
    x = sector_representative(tet1, (1,))
    assert W.eval(tet1.complex, tet1.fields_of(x)) == 1
    hinge = DiagOp([t for t in W.terms if t.region == "hinge_1_4"])
    rest = DiagOp([t for t in W.terms if t.region != "hinge_1_4"])
    assert hinge.eval(tet1.complex, tet1.fields_of(x)) == 1
    assert rest.eval(tet1.complex, tet1.fields_of(x)) == 0


def test_bilayer_w_is_i_to_minus_nr_nb(bilayer1):
    W = build_W(bilayer1)
    for s, k in (((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 12)):
        x = sector_representative(bilayer1, s)
        assert W.eval(bilayer1.complex, bilayer1.fields_of(x)) == k


def test_w2d_gates_are_plaquette_cs_and_boundary_tdagger(tri2):
    gates = compile_to_gates(build_W(tri2), tri2)
    names = {g.name for g in gates}
    assert names == {"CS", "CS†", "T†"}
    tdag = [g for g in gates if g.name == "T†"]
    lrb = tri2.complex.regions["L_rb"][1]
    assert sorted(tri2.edge_color(g.qubits[0])[0] for g in tdag) == sorted(lrb)
    assert all(tri2.edge_color(g.qubits[0])[1] == "r" for g in tdag)
    assert '"T†"' in gates_json(gates, tri2)
    assert gate_summary(gates, tri2)


def test_closed_w_matches_gate_by_gate_on_torus(torus22):
    rep = check_gate_compilation(torus22, samples=1000, seed=5)
    assert rep.passed
    assert set(rep.details["gate_counts"]) == {"CS", "CS†"}


def test_alpha_descends_pointwise_for_n3_and_n4():
    assert check_alpha_descent(build_torus([2, 2, 2], "simplicial"), 3, samples=30).passed
    assert check_alpha_descent(build_torus([2, 2, 2, 2], "simplicial"), 4, samples=10).passed


def test_alpha_first_term_and_first_correction():
    t3 = alpha_terms(3)
    assert t3[0].coeff == 4 and "ã_a2 ∪ ã_a3" in str(t3[0])
    t4 = alpha_terms(4)
    assert str(t4[1]) == "8·∫ (((a_a3 ∪₁ a_a2) ∪ a_a3) ∪ a_a4)"
    with pytest.raises(ValueError):
        build_W_generalN(6)


def test_alpha_vs_w_bulk_is_reported():
    rep = compare_alpha_with_W(3, build_torus([2, 2], "cubical"), samples=50)
    assert rep.details["samples"] == 50
    assert set(rep.details["difference_values"]) <= {0, 8}
