from __future__ import annotations

import random

import numpy as np

from cliffstab import gf2


def _random_rows(rng, n_rows, n_cols):
    return [rng.getrandbits(n_cols) for _ in range(n_rows)]


def test_rank_matches_numpy_over_small_matrices():
    rng = random.Random(1)
    for _ in range(50):
        rows = _random_rows(rng, 6, 8)
        # brute force: size of the span
        assert len(set(gf2.span(rows))) == 2 ** gf2.rank(rows)


def test_nullspace_vectors_are_orthogonal_and_complete():
    rng = random.Random(2)
    for _ in range(50):
        rows = _random_rows(rng, 5, 9)
        null = gf2.nullspace(rows, 9)
        for v in null:
            assert all(gf2.parity(v & r) == 0 for r in rows)
        assert len(null) == 9 - gf2.rank(rows)


def test_solve_returns_consistent_solution_or_none():
    rng = random.Random(3)
    for _ in range(100):
        rows = _random_rows(rng, 7, 6)
        x = rng.getrandbits(6)
        rhs = [gf2.parity(r & x) for r in rows]
        sol = gf2.solve(rows, rhs)
        assert sol is not None
        assert [gf2.parity(r & sol) for r in rows] == rhs
    assert gf2.solve([0b1, 0b1], [0, 1]) is None


def test_mask_of_accepts_numpy_integers():
    assert gf2.mask_of(np.array([0, 3])) == 0b1001


def test_min_weight_coset_finds_lightest_element():
    gens = [0b0110, 0b1100]
    assert gf2.popcount(gf2.min_weight_coset(0b0111, gens)) == 1


def test_transpose_round_trip():
    rows = [0b101, 0b011]
    assert gf2.transpose(gf2.transpose(rows, 3), 2) == rows
