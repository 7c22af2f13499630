"""Exact arithmetic in the cyclotomic field Q(zeta_16).

An element is stored as eight rational coefficients on the power basis
``1, zeta, ..., zeta^7`` with ``zeta^8 = -1``.  The hot paths of the state
simulator use bare 8-tuples of ints through the ``t_*`` helpers; the
:class:`Cyclo` wrapper adds division, Galois action and printing.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Union

import mpmath

Number = Union[int, Fraction]
Tup = tuple  # 8-tuple of ints

ORDER = 16
HALF = 8
ZERO_T: Tup = (0,) * HALF
ONE_T: Tup = (1,) + (0,) * (HALF - 1)


def t_unit(k: int) -> Tup:
    """zeta^k as an integer 8-tuple."""
    k %= ORDER
    out = [0] * HALF
    if k < HALF:
        out[k] = 1
    else:
        out[k - HALF] = -1
    return tuple(out)


def t_rot(a: Tup, k: int) -> Tup:
    """Multiply ``a`` by zeta^k."""
    k %= ORDER
    if k == 0:
        return a
    if k >= HALF:
        a = tuple(-c for c in a)
        k -= HALF
        if k == 0:
            return a
    # shift up by k; coefficients that wrap past zeta^7 pick up a sign
    return tuple(-a[i - k + HALF] if i < k else a[i - k] for i in range(HALF))


def t_add(a: Tup, b: Tup) -> Tup:
    return tuple(x + y for x, y in zip(a, b))


def t_sub(a: Tup, b: Tup) -> Tup:
    return tuple(x - y for x, y in zip(a, b))


def t_neg(a: Tup) -> Tup:
    return tuple(-x for x in a)


def t_scale(a: Tup, s: int) -> Tup:
    return tuple(s * x for x in a)


def t_mul(a: Tup, b: Tup) -> Tup:
    out = [0] * HALF
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            k = i + j
            if k < HALF:
                out[k] += x * y
            else:
                out[k - HALF] -= x * y
    return tuple(out)


def t_conj(a: Tup) -> Tup:
    """Complex conjugate: zeta^k -> zeta^{-k} = -zeta^{8-k}."""
    out = [0] * HALF
    out[0] = a[0]
    for k in range(1, HALF):
        out[HALF - k] -= a[k]
    return tuple(out)


def t_is_zero(a: Tup) -> bool:
    return not any(a)


class Cyclo:
    """An element of Q(zeta_16) with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Number] = ZERO_T):
        c = [Fraction(x) for x in coeffs]
        if len(c) != HALF:
            raise ValueError("need exactly 8 coefficients")
        self.c = tuple(int(x) if x.denominator == 1 else x for x in c)

    # constructors -----------------------------------------------------
    @classmethod
    def zeta(cls, k: int = 1) -> "Cyclo":
        return cls(t_unit(k))

    @classmethod
    def of(cls, x: Union["Cyclo", Number, Tup]) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, tuple):
            return cls(x)
        return cls((x,) + (0,) * (HALF - 1))

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Cyclo":
        o = Cyclo.of(other)
        return Cyclo(x + y for x, y in zip(self.c, o.c))

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo(-x for x in self.c)

    def __sub__(self, other) -> "Cyclo":
        return self + (-Cyclo.of(other))

    def __rsub__(self, other) -> "Cyclo":
        return Cyclo.of(other) - self

    def __mul__(self, other) -> "Cyclo":
        o = Cyclo.of(other)
        return Cyclo(t_mul(self.c, o.c))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Cyclo":
        return self * Cyclo.of(other).inverse()

    def __eq__(self, other) -> bool:
        try:
            o = Cyclo.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.c == o.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def mul_zeta(self, k: int) -> "Cyclo":
        return Cyclo(t_rot(self.c, k))

    def conj(self) -> "Cyclo":
        return Cyclo(t_conj(self.c))

    def galois(self, j: int) -> "Cyclo":
        """Apply the automorphism zeta -> zeta^j (j odd)."""
        if j % 2 == 0:
            raise ValueError("Galois automorphisms of Q(zeta_16) need odd j")
        out = Cyclo()
        for k, x in enumerate(self.c):
            if x:
                out = out + Cyclo.zeta(j * k) * x
        return out

    def norm(self) -> Fraction:
        """Field norm down to Q (product over all eight embeddings)."""
        prod = Cyclo.of(1)
        for j in range(1, ORDER, 2):
            prod = prod * self.galois(j)
        if not prod.is_rational():
            raise ArithmeticError("norm failed to land in Q")
        return Fraction(prod.c[0])

    def inverse(self) -> "Cyclo":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_16)")
        rest = Cyclo.of(1)
        for j in range(3, ORDER, 2):
            rest = rest * self.galois(j)
        n = (self * rest).c[0]
        return Cyclo(Fraction(x) / n for x in rest.c)

    def abs2(self) -> "Cyclo":
        return self * self.conj()

    # inspection -------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.c[0])

    def unit_power(self) -> int | None:
        """Return k if self == zeta^k, else None."""
        for k in range(ORDER):
            if self.c == t_unit(k):
                return k
        return None

    def to_complex(self) -> complex:
        return sum(float(x) * cmath.exp(2j * math.pi * k / ORDER) for k, x in enumerate(self.c))

    def to_mpc(self, prec: int = 128) -> mpmath.mpc:
        with mpmath.workprec(prec):
            total = mpmath.mpc(0)
            for k, x in enumerate(self.c):
                if x:
                    total += mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator * mpmath.expjpi(mpmath.mpf(k) / HALF)
            return total

    def __repr__(self) -> str:
        return f"Cyclo({self})"

    def __str__(self) -> str:
        parts = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            mono = "" if k == 0 else ("ζ" if k == 1 else f"ζ^{k}")
            if mono and x == 1:
                s = mono
            elif mono and x == -1:
                s = "-" + mono
            else:
                s = f"{x}{mono}" if not mono else f"{x}*{mono}"
            parts.append(s)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def to_json(self) -> list:
        return [str(x) for x in self.c]


def phase_str(k: int) -> str:
    """Human readable e^{2 pi i k/16} with the reduced fraction of pi."""
    k %= ORDER
    if k == 0:
        return "1"
    signed = k - ORDER if k > HALF else k
    frac = Fraction(signed, HALF)
    sign = "-" if frac < 0 else ""
    frac = abs(frac)
    num = "" if frac.numerator == 1 else str(frac.numerator)
    if frac.denominator == 1:
        return f"e^{{{sign}{num}iπ}}"
    return f"e^{{{sign}{num}iπ/{frac.denominator}}}"
