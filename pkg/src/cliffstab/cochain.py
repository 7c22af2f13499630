"""Cochains over Z_{2^k}: coboundary, cup, cup-1, lifts and integration.

Values live in a numpy array whose first axis runs over the cells of the
cochain's degree.  Extra trailing axes are a batch of independent cochains
(used to evaluate many gauge configurations at once).  Arrays of dtype
``object`` holding :class:`~cliffstab.poly.Poly` entries run the same code
symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .complex import CUBICAL, SIMPLICIAL, CellComplex
from .poly import Poly

MAX_K = 4
MODULI = tuple(2 ** k for k in range(1, MAX_K + 1))


class InexactDivision(ArithmeticError):
    """Halving met an odd value (the input was not a cocycle or broke a constraint)."""


class CochainError(ValueError):
    pass


def _check_modulus(m: int) -> int:
    if m not in MODULI:
        raise CochainError(f"modulus {m} not in {MODULI}")
    return m


def _is_symbolic(v: np.ndarray) -> bool:
    return v.dtype == object


def _reduce(v: np.ndarray, m: int) -> np.ndarray:
    if _is_symbolic(v):
        return np.array([x % m if isinstance(x, Poly) else int(x) % m for x in v.ravel()], dtype=object).reshape(v.shape)
    return np.mod(v, m)


@dataclass
class Cochain:
    complex: CellComplex
    degree: int
    modulus: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_modulus(self.modulus)
        if not 0 <= self.degree <= self.complex.dim:
            raise CochainError(f"degree {self.degree} outside 0..{self.complex.dim}")
        v = np.asarray(self.values)
        if v.shape[:1] != (self.complex.n(self.degree),):
            raise CochainError("values must cover exactly the cells of the cochain's degree")
        if v.dtype != object:
            v = v.astype(np.int64)
        self.values = _reduce(v, self.modulus)

    @property
    def symbolic(self) -> bool:
        return _is_symbolic(self.values)

    def __add__(self, other: "Cochain") -> "Cochain":
        a, b = _promote(self, other)
        if a.degree != b.degree:
            raise CochainError("degree mismatch in addition")
        return Cochain(a.complex, a.degree, a.modulus, a.values + b.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        a, b = _promote(self, other)
        return Cochain(a.complex, a.degree, a.modulus, a.values - b.values)

    def __neg__(self) -> "Cochain":
        return Cochain(self.complex, self.degree, self.modulus, -self.values)

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.complex, self.degree, self.modulus, self.values * k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.complex is other.complex and self.degree == other.degree
                and self.modulus == other.modulus and np.array_equal(self.values, other.values))

    def is_zero(self) -> bool:
        if self.symbolic:
            return all(not x for x in self.values.ravel())
        return not self.values.any()

    def to_json(self) -> dict:
        vals = self.values.tolist() if not self.symbolic else [repr(x) for x in self.values]
        return {"degree": self.degree, "modulus": self.modulus, "values": vals}


# ----------------------------------------------------------------------
# constructors


def zeros(cx: CellComplex, degree: int, modulus: int = 2, batch: tuple = ()) -> Cochain:
    return Cochain(cx, degree, modulus, np.zeros((cx.n(degree),) + tuple(batch), dtype=np.int64))


def constant(cx: CellComplex, degree: int, value: int, modulus: int = 2) -> Cochain:
    return Cochain(cx, degree, modulus, np.full(cx.n(degree), value, dtype=np.int64))


def indicator(cx: CellComplex, degree: int, idx: int, modulus: int = 2) -> Cochain:
    v = np.zeros(cx.n(degree), dtype=np.int64)
    v[idx] = 1
    return Cochain(cx, degree, modulus, v)


def random_cochain(cx: CellComplex, degree: int, modulus: int, rng: np.random.Generator, batch: tuple = ()) -> Cochain:
    return Cochain(cx, degree, modulus, rng.integers(0, modulus, size=(cx.n(degree),) + tuple(batch)))


# ----------------------------------------------------------------------
# modulus promotion


def promote(f: Cochain, modulus: int) -> Cochain:
    """View ``f`` in a larger modulus with representatives ``0..m-1`` kept."""
    if modulus == f.modulus:
        return f
    if modulus < f.modulus:
        raise CochainError("cannot promote to a smaller modulus")
    if f.symbolic:
        vals = np.array([_lift_poly(x, f.modulus) for x in f.values.ravel()], dtype=object).reshape(f.values.shape)
        return Cochain(f.complex, f.degree, modulus, vals)
    return Cochain(f.complex, f.degree, modulus, f.values)


def _lift_poly(x, m: int):
    if not isinstance(x, Poly):
        return int(x) % m
    if m == 2:
        return x.lift_parity()
    # larger moduli: the representative in 0..m-1 of a general polynomial has
    # no closed multilinear form; only already-reduced monomials pass.
    if all(0 <= c < m for c in x.t.values()) and x.degree <= 1 and sum(x.t.values()) < m:
        return x
    from .poly import NonMonomializable

    raise NonMonomializable(f"cannot lift a symbolic Z_{m} value canonically")


def _promote(f: Cochain, g: Cochain) -> tuple:
    if f.complex is not g.complex:
        raise CochainError("cochains live on different complexes")
    m = max(f.modulus, g.modulus)
    return promote(f, m), promote(g, m)


def lift(f: Cochain, target_k: int) -> Cochain:
    """Z_2 -> Z_{2^k} lift keeping the values 0 and 1."""
    if f.modulus != 2:
        raise CochainError("lift expects a Z_2 cochain")
    if not 1 <= target_k <= MAX_K:
        raise CochainError(f"target_k must lie in 1..{MAX_K}")
    return promote(f, 2 ** target_k)


def reduce_mod(f: Cochain, modulus: int) -> Cochain:
    if f.modulus % modulus:
        raise CochainError("can only reduce to a divisor of the modulus")
    return Cochain(f.complex, f.degree, modulus, f.values)


def half(f: Cochain) -> Cochain:
    """Exact division by two; modulus halves.  Odd values raise."""
    if f.modulus < 4:
        raise CochainError("halving needs modulus >= 4")
    if f.symbolic:
        vals = np.array([x.half() if isinstance(x, Poly) else _half_int(int(x)) for x in f.values.ravel()],
                        dtype=object).reshape(f.values.shape)
    else:
        if np.any(f.values % 2):
            bad = np.argwhere(f.values % 2)[0]
            raise InexactDivision(f"odd value at cell {tuple(int(b) for b in bad)}")
        vals = f.values // 2
    return Cochain(f.complex, f.degree, f.modulus // 2, vals)


def _half_int(v: int) -> int:
    if v % 2:
        raise InexactDivision("odd value under halving")
    return v // 2


# ----------------------------------------------------------------------
# coboundary


@lru_cache(maxsize=None)
def _cobound_table(cx_id: int, d: int, cx_ref: tuple) -> tuple:
    cx = cx_ref[0]
    rows = []
    for fl in cx.faces[d + 1]:
        rows.append(tuple(fl))
    return tuple(rows)


def coboundary(f: Cochain) -> Cochain:
    cx = f.complex
    if f.degree >= cx.dim:
        raise CochainError("coboundary of a top-degree cochain")
    faces = cx.faces[f.degree + 1]
    out = []
    for fl in faces:
        acc = 0
        for j, s in fl:
            acc = acc + s * f.values[j]
        out.append(acc)
    vals = _stack(out, f.values, cx.n(f.degree + 1))
    return Cochain(cx, f.degree + 1, f.modulus, vals)


def _stack(rows: list, like: np.ndarray, n: int) -> np.ndarray:
    if _is_symbolic(like):
        arr = np.empty(n, dtype=object)
        for i, r in enumerate(rows):
            arr[i] = r
        return arr
    shape = (n,) + like.shape[1:]
    if not rows:
        return np.zeros(shape, dtype=np.int64)
    return np.array([np.broadcast_to(r, like.shape[1:]) for r in rows], dtype=np.int64).reshape(shape)


# ----------------------------------------------------------------------
# cup product


def _shuffle_sign(order: Sequence[int]) -> int:
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv += 1
    return -1 if inv % 2 else 1


_CUP_CACHE: dict = {}


def _cup_terms(cx: CellComplex, m: int, n: int) -> list:
    """Per target cell: list of (sign, front index, back index)."""
    key = (id(cx), m, n)
    if key in _CUP_CACHE and _CUP_CACHE[key][0] is cx:
        return _CUP_CACHE[key][1]
    table = []
    d = m + n
    for i, c in enumerate(cx.cells[d]):
        if cx.kind == SIMPLICIAL:
            front = cx.subsimplex(d, i, range(0, m + 1))
            back = cx.subsimplex(d, i, range(m, d + 1))
            table.append([(1, front, back)])
        else:
            terms = []
            axes = c.axes
            corner = c.points[0]
            for I in itertools.combinations(range(d), m):
                Ibar = tuple(k for k in range(d) if k not in I)
                sign = _shuffle_sign(I + Ibar)
                fa = tuple(axes[k] for k in I)
                ga = tuple(axes[k] for k in Ibar)
                shifted = list(corner)
                for a in fa:
                    shifted[a] += 1
                terms.append((sign, cx.subcube(corner, fa), cx.subcube(shifted, ga)))
            table.append(terms)
    _CUP_CACHE[key] = (cx, table)
    return table


def cup(f: Cochain, g: Cochain) -> Cochain:
    """Cup product; simplicial front/back faces or the signed cubical diagonal."""
    f, g = _promote(f, g)
    cx = f.complex
    d = f.degree + g.degree
    if d > cx.dim:
        raise CochainError("cup product degree exceeds complex dimension")
    table = _cup_terms(cx, f.degree, g.degree)
    out = []
    for terms in table:
        acc = 0
        for s, a, b in terms:
            prod = f.values[a] * g.values[b]
            acc = acc + (prod if s == 1 else -prod)
        out.append(acc)
    vals = _stack(out, f.values if f.values.ndim >= g.values.ndim else g.values, cx.n(d))
    return Cochain(cx, d, f.modulus, vals)


def cup_many(*fs: Cochain) -> Cochain:
    out = fs[0]
    for f in fs[1:]:
        out = cup(out, f)
    return out


# ----------------------------------------------------------------------
# cup-1 product


def _cup1_terms(cx: CellComplex, p: int, q: int) -> list:
    key = ("cup1", id(cx), p, q)
    if key in _CUP_CACHE and _CUP_CACHE[key][0] is cx:
        return _CUP_CACHE[key][1]
    n = p + q - 1
    table = []
    for i in range(cx.n(n)):
        terms = []
        for k in range(0, p):
            fpos = list(range(0, k + 1)) + list(range(k + q, n + 1))
            gpos = list(range(k, k + q + 1))
            sign = (-1) ** ((p - k) * (q + 1))
            terms.append((sign, cx.subsimplex(n, i, fpos), cx.subsimplex(n, i, gpos)))
        table.append(terms)
    _CUP_CACHE[key] = (cx, table)
    return table


def cup1(f: Cochain, g: Cochain) -> Cochain:
    """Steenrod cup-1 product of degree ``p + q - 1``.

    Defined on simplicial complexes; on cubical complexes only the edge-wise
    case p = q = 1, ``(f cup_1 g)(e) = f(e) g(e)``, is available and other
    degrees must go through :func:`cliffstab.complex.refine`.
    """
    f, g = _promote(f, g)
    cx = f.complex
    p, q = f.degree, g.degree
    n = p + q - 1
    if n < 0 or p == 0 or q == 0:
        # cup_1 with a 0-cochain vanishes identically
        if n < 0:
            raise CochainError("cup_1 of two 0-cochains is undefined")
        return zeros(cx, n, f.modulus)
    if n > cx.dim:
        raise CochainError("cup_1 degree exceeds complex dimension")
    if cx.kind == CUBICAL:
        if (p, q) != (1, 1):
            raise CochainError("cup_1 on a cubical complex needs simplicial refinement")
        return Cochain(cx, 1, f.modulus, f.values * g.values)
    table = _cup1_terms(cx, p, q)
    out = []
    for terms in table:
        acc = 0
        for s, a, b in terms:
            prod = f.values[a] * g.values[b]
            acc = acc + (prod if s == 1 else -prod)
        out.append(acc)
    vals = _stack(out, f.values if f.values.ndim >= g.values.ndim else g.values, cx.n(n))
    return Cochain(cx, n, f.modulus, vals)


# ----------------------------------------------------------------------
# integration


def integrate(f: Cochain, region: str | None = None):
    """Oriented sum over top cells (or over the cells of a labelled region).

    Returns an int, an int array over the batch axes, or a Poly.
    """
    cx = f.complex
    if region is None or region == "bulk":
        if f.degree != cx.dim:
            raise CochainError("integrand degree must equal the complex dimension")
        items = [(i, int(cx.orientation[i])) for i in range(cx.n(cx.dim))]
    else:
        if region not in cx.regions:
            raise CochainError(f"unknown region {region!r}")
        if cx.region_dim[region] != f.degree:
            raise CochainError(f"region {region} has dimension {cx.region_dim[region]}, integrand degree {f.degree}")
        items = sorted(cx.region_sign[region].items())
    acc = 0
    for i, s in items:
        if s:
            acc = acc + s * f.values[i]
    if isinstance(acc, Poly):
        return acc % f.modulus
    if isinstance(acc, np.ndarray):
        return np.mod(acc, f.modulus)
    return int(acc) % f.modulus


# ----------------------------------------------------------------------
# gauge configurations


@dataclass
class GaugeConfig:
    """Per-colour Z_2 gauge fields on one complex."""

    complex: CellComplex
    fields: dict

    @property
    def colors(self) -> tuple:
        return tuple(self.fields)

    def is_flat(self) -> bool:
        return all(coboundary(a).is_zero() for a in self.fields.values())

    def __getitem__(self, c: str) -> Cochain:
        return self.fields[c]
