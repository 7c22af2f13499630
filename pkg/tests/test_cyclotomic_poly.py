from __future__ import annotations

import cmath
import math
import random

import numpy as np

from cliffstab.cyclotomic import Cyclo, phase_str
from cliffstab.poly import Poly


def test_zeta_powers_wrap_with_sign():
    z = Cyclo.zeta(1)
    p = Cyclo.of(1)
    for _ in range(16):
        p = p * z
    assert p == Cyclo.of(1)
    assert Cyclo.zeta(8) == Cyclo.of(-1)


def test_unit_power_and_complex_value_agree():
    for k in range(16):
        c = Cyclo.zeta(k)
        assert c.unit_power() == k
        assert abs(c.to_complex() - cmath.exp(2j * math.pi * k / 16)) < 1e-12


def test_abs2_of_sum_is_real_and_rational():
    c = Cyclo.of(1) + Cyclo.zeta(-2)
    a = c.abs2()
    assert a == a.conj()
    assert abs(a.to_complex() - abs(1 + cmath.exp(-1j * math.pi / 4)) ** 2) < 1e-12


def test_inverse():
    c = Cyclo.of(1) + Cyclo.zeta(3)
    assert c * c.inverse() == Cyclo.of(1)


def test_phase_strings():
    assert phase_str(0) == "1"
    assert phase_str(14) == "e^{-iπ/4}"
    assert phase_str(1) == "e^{iπ/8}"
    assert phase_str(12) == "e^{-iπ/2}"


def test_poly_multilinear_product_and_flip():
    x0, x1 = Poly.var(0), Poly.var(1)
    p = (x0 * x1 * 4 + x0 * 2) % 16
    for x in range(4):
        assert p(x) == (4 * (x & 1) * (x >> 1) + 2 * (x & 1)) % 16
        assert p.flip(0b10)(x) == p(x ^ 0b10)
    assert (x0 * x0) == x0


def test_poly_batch_matches_scalar():
    rng = random.Random(0)
    p = Poly.var(0) * Poly.var(3) * 4 + Poly.var(2) * 14
    xs = np.array([rng.getrandbits(5) for _ in range(64)], dtype=np.uint64)
    assert [int(v) % 16 for v in p.evaluate_batch(xs)] == [p(int(x)) % 16 for x in xs]
