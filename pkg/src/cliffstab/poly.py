"""Multilinear integer polynomials in qubit bits.

A :class:`Poly` maps a monomial (an int bitmask of qubit indices; ``0`` is
the constant term) to an integer coefficient.  Because every variable is a
bit, ``x**2 == x`` and monomials multiply by OR-ing masks.  Diagonal phase
operators compile to a ``Poly`` giving the zeta_16 exponent of each basis
configuration.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

import numpy as np

from .gf2 import bits, popcount


class NonMonomializable(ArithmeticError):
    """A symbolic operation has no exact multilinear form (e.g. an odd halving)."""


class Poly:
    __slots__ = ("t",)

    def __init__(self, terms: dict | None = None):
        self.t = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({0: c})

    @classmethod
    def var(cls, q: int) -> "Poly":
        return cls({1 << q: 1})

    @classmethod
    def monomial(cls, mask: int, c: int = 1) -> "Poly":
        return cls({mask: c})

    # arithmetic -------------------------------------------------------
    @staticmethod
    def _as(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly({0: int(x)})

    def __add__(self, other) -> "Poly":
        o = Poly._as(other)
        out = dict(self.t)
        for m, c in o.t.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.t.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly._as(other))

    def __rsub__(self, other) -> "Poly":
        return Poly._as(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            k = int(other)
            return Poly({m: c * k for m, c in self.t.items()})
        out: dict = {}
        for m1, c1 in self.t.items():
            for m2, c2 in other.t.items():
                m = m1 | m2
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __mod__(self, modulus: int) -> "Poly":
        return Poly({m: c % modulus for m, c in self.t.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, (Poly, int)) and self.t == Poly._as(other).t

    def __hash__(self) -> int:
        return hash(frozenset(self.t.items()))

    def __bool__(self) -> bool:
        return bool(self.t)

    def __repr__(self) -> str:
        if not self.t:
            return "Poly(0)"
        parts = []
        for m in sorted(self.t):
            v = "*".join(f"x{q}" for q in bits(m)) or "1"
            parts.append(f"{self.t[m]}*{v}")
        return "Poly(" + " + ".join(parts) + ")"

    # structure --------------------------------------------------------
    @property
    def degree(self) -> int:
        return max((popcount(m) for m in self.t), default=0)

    @property
    def support(self) -> int:
        s = 0
        for m in self.t:
            s |= m
        return s

    def items(self):
        return self.t.items()

    def half(self) -> "Poly":
        """Exact division by two of the coefficient representation."""
        if any(c % 2 for c in self.t.values()):
            raise NonMonomializable("odd coefficient under symbolic halving")
        return Poly({m: c // 2 for m, c in self.t.items()})

    def lift_parity(self) -> "Poly":
        """Integer polynomial equal to the {0,1} parity of this mod-2 polynomial.

        Uses ``parity(m_1..m_k) = sum_S (-2)^(|S|-1) prod_{i in S} m_i``.
        """
        monos = [m for m, c in self.t.items() if c % 2]
        if len(monos) > 14:
            raise NonMonomializable("parity lift of too many monomials")
        out: dict = {}
        for k in range(1, len(monos) + 1):
            coeff = (-2) ** (k - 1)
            for sub in combinations(monos, k):
                m = 0
                for x in sub:
                    m |= x
                out[m] = out.get(m, 0) + coeff
        return Poly(out)

    def flip(self, mask: int) -> "Poly":
        """Substitute ``x_q -> 1 - x_q`` for every ``q`` in ``mask``."""
        if not mask:
            return self
        out: dict = {}
        for m, c in self.t.items():
            hit = m & mask
            rest = m & ~mask
            # prod_{q in hit} (1 - x_q) = sum_{T subset hit} (-1)^|T| x_T
            hb = list(bits(hit))
            for k in range(len(hb) + 1):
                sgn = -1 if k % 2 else 1
                for sub in combinations(hb, k):
                    mm = rest
                    for q in sub:
                        mm |= 1 << q
                    out[mm] = out.get(mm, 0) + sgn * c
        return Poly(out)

    # evaluation -------------------------------------------------------
    def __call__(self, x: int) -> int:
        return sum(c for m, c in self.t.items() if (x & m) == m)

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate on an array of configurations (uint64 or object ints)."""
        xs = np.asarray(xs)
        out = np.zeros(xs.shape, dtype=np.int64)
        if xs.dtype == object:
            for m, c in self.t.items():
                out += c * np.array([(int(x) & m) == m for x in xs], dtype=np.int64)
            return out
        for m, c in self.t.items():
            mm = np.uint64(m)
            out += c * ((xs & mm) == mm)
        return out


def poly_sum(polys: Iterable) -> Poly:
    acc: dict = {}
    for p in polys:
        for m, c in Poly._as(p).t.items():
            acc[m] = acc.get(m, 0) + c
    return Poly(acc)
