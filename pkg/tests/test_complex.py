from __future__ import annotations

import pytest

from cliffstab.complex import (build_tetrahedron, build_torus, build_triangle_lattice, check_complex,
                               refine)


@pytest.mark.parametrize("dims,kind", [([2, 2], "cubical"), ([3, 3], "simplicial"), ([2, 2, 2], "cubical"),
                                       ([1, 1, 1], "cubical"), ([2, 1, 1], "cubical")])
def test_torus_is_closed_with_zero_euler(dims, kind):
    cx = build_torus(dims, kind)
    assert cx.closed
    assert cx.euler() == 0
    check_complex(cx)


def test_boundary_of_boundary_vanishes():
    for cx in (build_tetrahedron(2), build_triangle_lattice(3, "simplicial"), build_torus([2, 2, 2], "simplicial")):
        for d in range(2, cx.dim + 1):
            assert not (cx.boundary_matrix(d - 1) @ cx.boundary_matrix(d)).any()


def test_single_simplex_counts():
    assert build_triangle_lattice(1, "simplicial").counts == (3, 3, 1)
    assert build_tetrahedron(1).counts == (4, 6, 4, 1)


def test_triangle_regions_cover_the_boundary():
    cx = build_triangle_lattice(2, "cubical")
    edges = set(cx.boundary_chain())
    regions = set()
    for name in ("L_r", "L_b", "L_rb"):
        regions |= set(cx.regions[name][1])
    assert edges == regions


def test_tetrahedron_regions():
    cx = build_tetrahedron(2)
    for name in ("bdry1", "bdry2", "bdry3", "bdry4", "hinge_1_4"):
        assert name in cx.regions
    assert cx.region_dim["hinge_1_4"] == 1


def test_refinement_keeps_euler_characteristic():
    cx = build_triangle_lattice(2, "cubical")
    assert refine(cx).euler() == cx.euler() == 1


def test_json_is_stable():
    a = build_triangle_lattice(2, "simplicial").dumps()
    b = build_triangle_lattice(2, "simplicial").dumps()
    assert a == b
