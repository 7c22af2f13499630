from __future__ import annotations

import numpy as np
import pytest

from cliffstab.cochain import (Cochain, CochainError, InexactDivision, coboundary, cup, cup1, half, indicator,
                               integrate, lift, random_cochain, reduce_mod, zeros)
from cliffstab.complex import build_tetrahedron, build_torus, build_triangle_lattice
from cliffstab.verify import cochain_identities, integrate_chain


@pytest.fixture(scope="module")
def t3():
    return build_torus([2, 2, 2], "simplicial")


def test_cup_of_vertex_and_edge_on_single_simplex():
    cx = build_triangle_lattice(1, "simplicial")
    one = Cochain(cx, 0, 2, np.ones(cx.n(0), dtype=np.int64))
    a = random_cochain(cx, 1, 2, np.random.default_rng(0))
    assert cup(one, a) == a
    assert cup(a, one) == a


def test_cup_is_graded_commutative_only_up_to_coboundary(t3):
    rng = np.random.default_rng(1)
    a = random_cochain(t3, 1, 2, rng)
    b = random_cochain(t3, 1, 2, rng)
    diff = cup(a, b) + cup(b, a)
    # a∪b + b∪a = d(a∪1b) + da∪1b + a∪1db
    assert diff == coboundary(cup1(a, b)) + cup1(coboundary(a), b) + cup1(a, coboundary(b))


def test_batched_cochains_match_column_by_column(t3):
    rng = np.random.default_rng(2)
    a = random_cochain(t3, 1, 4, rng, batch=(5,))
    b = random_cochain(t3, 1, 4, rng, batch=(5,))
    ab = cup(a, b)
    for k in range(5):
        col = cup(Cochain(t3, 1, 4, a.values[:, k]), Cochain(t3, 1, 4, b.values[:, k]))
        assert np.array_equal(ab.values[:, k], col.values)


def test_half_is_exact_or_raises():
    cx = build_triangle_lattice(1, "simplicial")
    f = Cochain(cx, 1, 4, np.array([2, 0, 2]))
    assert np.array_equal(half(f).values, [1, 0, 1])
    with pytest.raises(InexactDivision):
        half(Cochain(cx, 1, 4, np.array([1, 0, 0])))


def test_square_equals_half_coboundary_of_lift():
    cx = build_torus([3, 3], "simplicial")
    rng = np.random.default_rng(3)
    from cliffstab.verify import random_cocycles
    for col in random_cocycles(cx, 20, rng).T:
        a = Cochain(cx, 1, 2, col)
        assert cup(a, a) == reduce_mod(half(coboundary(lift(a, 2))), 2)


def test_stokes_on_tetrahedron_regions():
    cx = build_tetrahedron(2)
    rng = np.random.default_rng(4)
    for region in ("bdry4", "hinge_1_4"):
        d = cx.region_dim[region]
        g = random_cochain(cx, d - 1, 16, rng)
        assert integrate(coboundary(g), region) == integrate_chain(g, cx.boundary_chain(region))


def test_degree_errors():
    cx = build_triangle_lattice(1, "simplicial")
    with pytest.raises(CochainError):
        coboundary(zeros(cx, 2))
    with pytest.raises(CochainError):
        Cochain(cx, 1, 3, np.zeros(3))


def test_indicator_integrates_to_orientation():
    cx = build_torus([2, 2], "cubical")
    f = indicator(cx, 2, 0, 16)
    assert integrate(f) % 16 in (1, 15)


def test_identity_suite_thousand_cases_each():
    rep = cochain_identities(1000, seed=11)
    assert all(v >= 1000 for v in rep.details["cases"].values())
    assert rep.passed, rep.details["failures"]
    assert rep.seconds < 60
