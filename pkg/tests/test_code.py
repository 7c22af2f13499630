from __future__ import annotations

import pytest

from cliffstab import gf2
from cliffstab.code import (build_2d_code, build_3d_code, find_logical_Z, general_N_descriptor)
from cliffstab.complex import build_tetrahedron, build_torus, build_triangle_lattice
from cliffstab.sim import flat_configs
from cliffstab.verify import check_stabilizers


def test_single_simplex_counts(tri1):
    assert tri1.n_qubits == 9
    assert 2 ** len(tri1.logical_classes()) == 2


def test_l_rb_edge_carries_rb_and_g_constraints(tri1):
    e = next(iter(tri1.complex.regions["L_rb"][1]))
    masks = {g.z_mask for g in tri1.z_generators if g.anchor == ("e", e)}
    assert (1 << tri1.qubit(e, "r")) | (1 << tri1.qubit(e, "b")) in masks
    assert 1 << tri1.qubit(e, "g") in masks


def test_bulk_vertex_dressing_is_cz_level(torus22):
    for S in torus22.x_generators:
        assert len(S.colors) == 1
        assert set(S.phase.t.values()) <= {8}
        assert S.phase.degree <= 2


def test_closed_surface_color_product_has_no_x_part(torus22):
    for c in torus22.colors:
        m = 0
        for S in torus22.x_generators:
            if S.colors == (c,):
                m ^= S.x_mask
        assert m == 0


def test_tetrahedron_qubit_and_logical_counts(tet1):
    assert tet1.n_qubits == 24
    assert 2 ** len(tet1.logical_classes()) == 2
    assert 2 ** len(build_3d_code(build_tetrahedron(2)).logical_classes()) == 2


def test_bdry4_x_generators_are_truncated_products():
    code = build_3d_code(build_tetrahedron(2))
    for S in code.x_generators:
        labels = code.complex.label(0, S.anchor[1])
        if labels == ["bdry4"]:
            assert set(S.colors) in ({"r", "g"}, {"g", "b"}, {"y"}, {"r", "b"})


def test_bilayer_has_two_logicals_and_swapped_boundary(bilayer1):
    assert len(bilayer1.logicals) == 2
    e = next(iter(bilayer1.complex.regions["L_rb"][1]))
    masks = {g.z_mask for g in bilayer1.z_generators if g.anchor == ("e", e)}
    q = bilayer1.qubit
    assert (1 << q(e, "r")) | (1 << q(e, "b'")) in masks
    assert (1 << q(e, "g")) | (1 << q(e, "g'")) in masks


def test_logical_z_commutes_with_all_generators(tri1, tri2):
    for code in (tri1, tri2):
        for S in code.x_generators:
            assert gf2.parity(S.x_mask & code.logicals[0].z) == 0


def test_logical_z_matches_oracle(tri2):
    oracle = find_logical_Z(tri2)
    assert gf2.in_span(tri2.logicals[0].z, list(tri2.z_rows) + oracle)


def test_flat_config_count_on_torus(torus22):
    assert len(flat_configs(torus22)) == 2 ** 15


@pytest.mark.parametrize("name", ["tri1", "tri2", "torus22", "tet1", "bilayer1"])
def test_generator_group_relations(name, request):
    rep = check_stabilizers(request.getfixturevalue(name))
    assert rep.passed, rep.witnesses


def test_untwisted_code_has_no_dressing():
    code = build_2d_code(build_torus([2, 2], "cubical"), twisted=False)
    assert all(not S.phase for S in code.x_generators)


def test_general_n_descriptor():
    d3 = general_N_descriptor(3)
    d5 = general_N_descriptor(5)
    assert d5.dressing_level == 4
    code = d3.instantiate(build_triangle_lattice(1, "simplicial"))
    assert code.dumps() == build_2d_code(build_triangle_lattice(1, "simplicial")).dumps()
    with pytest.raises(ValueError):
        general_N_descriptor(2)
    with pytest.raises(NotImplementedError):
        d5.instantiate(build_triangle_lattice(1, "simplicial"))


def test_missing_regions_rejected():
    cx = build_triangle_lattice(1, "simplicial")
    cx.regions.pop("L_rb")
    with pytest.raises(ValueError):
        build_2d_code(cx)
