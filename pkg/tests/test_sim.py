from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cliffstab.code import PhasedPauli
from cliffstab.cyclotomic import Cyclo
from cliffstab.diagop import build_V, build_W
from cliffstab.sim import (LeakageError, SparseState, add, apply_cnot_layer, apply_diag,
                           codespace_basis, codespace_dimension, fidelity, inner, logical_matrix,
                           measure, norm2, norm2_by_entries, project, project_codespace, proportional)
from cliffstab.verify import folded_basis


def _random_state(rng, n_bits, k=6):
    st = SparseState({}, 0)
    for _ in range(k):
        x = rng.getrandbits(n_bits)
        st = add(st, SparseState.basis(x).rotated(rng.randrange(16)))
    return st


def test_norm_two_ways(tri2):
    rng = random.Random(0)
    psi = project_codespace(tri2, SparseState.basis(0))
    assert norm2(psi) == norm2_by_entries(psi)
    phi = _random_state(rng, tri2.n_qubits)
    assert norm2(phi) == norm2_by_entries(phi)


def test_cnot_and_diag_are_unitary(tri2):
    rng = random.Random(1)
    V, W = build_V(tri2), build_W(tri2)
    for _ in range(5):
        a, b = _random_state(rng, tri2.n_qubits), _random_state(rng, tri2.n_qubits)
        for op in (lambda s: apply_cnot_layer(V, s, tri2), lambda s: apply_diag(W, s, tri2)):
            assert inner(op(a), op(b)) == inner(a, b)


def test_projection_of_zero_config_by_z_is_trivial(tri1):
    psi = SparseState.basis(0)
    for S in tri1.z_generators:
        psi = project(S, psi)
    assert proportional(SparseState.basis(0), psi) == Cyclo.of(1)


def test_projection_support_bound(tri1):
    psi = project_codespace(tri1, SparseState.basis(0))
    assert len(psi.entries) <= 2 ** len(tri1.x_generators)


def test_codespace_basis_sizes(tri1, tri2, tet1, bilayer1):
    assert [len(codespace_basis(c)) for c in (tri1, tri2, tet1, bilayer1)] == [2, 2, 2, 4]
    for code in (tri1, bilayer1):
        basis = [b for _, b in codespace_basis(code)]
        for i in range(len(basis)):
            for j in range(i):
                assert not inner(basis[i], basis[j])


def test_logical_matrix_exponents(tri1, tet1, bilayer1):
    for code, ex in ((tri1, [0, 14]), (tet1, [0, 1]), (bilayer1, [0, 0, 0, 12])):
        M = logical_matrix(code, [build_V(code), build_W(code)])
        assert M.diagonal_exponents() == ex


def test_leakage_is_a_hard_error(tri1):
    with pytest.raises(LeakageError):
        logical_matrix(tri1, [PhasedPauli(x=1)])


def test_measure_sg_is_fair_coin_and_repeatable(tri1):
    b0, b1 = folded_basis(tri1)
    psi = add(b0, b1)
    S = next(S for S in tri1.x_generators if "g" in S.colors)
    out, post, p = measure(S, psi, random.Random(0))
    assert p == Fraction(1, 2)
    out2, post2, p2 = measure(S, post, random.Random(1))
    assert (out2, p2) == (out, 1)
    assert fidelity(post, post2) == Cyclo.of(1)


def test_measure_green_z_on_zero_is_deterministic(tri1):
    b0, _ = folded_basis(tri1)
    q = tri1.qubit(0, "g")
    out, _, p = measure(PhasedPauli(z=1 << q), b0, random.Random(0))
    assert (out, p) == (1, 1)


def test_gsd_trace_on_torus(torus22):
    res = codespace_dimension(torus22)
    assert res.dimension == 22
