"""Exact sparse state simulation in the Z-basis of gauge configurations.

A :class:`SparseState` stores ``config -> amplitude`` where an amplitude is
an 8-tuple of coefficients in Z[zeta_16] (rationals are allowed once a
non-dyadic normalisation enters), and a shared denominator ``2^denom_exp``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import gf2
from .code import Code, PhasedPauli, StabilizerGenerator
from .cyclotomic import ONE_T, ZERO_T, Cyclo, t_add, t_conj, t_is_zero, t_mul, t_rot, t_scale
from .diagop import MOD, CnotLayer, DiagOp
from .poly import Poly


class LeakageError(RuntimeError):
    """A circuit moved weight out of the code space."""

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class SectorError(RuntimeError):
    pass


@dataclass
class SparseState:
    entries: dict = field(default_factory=dict)
    denom_exp: int = 0

    @classmethod
    def basis(cls, config: int) -> "SparseState":
        return cls({int(config): ONE_T}, 0)

    def copy(self) -> "SparseState":
        return SparseState(dict(self.entries), self.denom_exp)

    def __len__(self) -> int:
        return len(self.entries)

    def support(self) -> list:
        return sorted(self.entries)

    def prune(self) -> "SparseState":
        self.entries = {x: a for x, a in self.entries.items() if not t_is_zero(a)}
        return self

    def scaled(self, c: Cyclo) -> "SparseState":
        return SparseState({x: t_mul(a, c.c) for x, a in self.entries.items()}, self.denom_exp).prune()

    def rotated(self, k: int) -> "SparseState":
        return SparseState({x: t_rot(a, k) for x, a in self.entries.items()}, self.denom_exp)

    def amplitude(self, config: int) -> Cyclo:
        a = self.entries.get(config, ZERO_T)
        return Cyclo(a) * Fraction(1, 2 ** self.denom_exp)

    def to_json(self, code: Code | None = None) -> dict:
        return {
            "denom_exp": self.denom_exp,
            "entries": [[hex(x), str(Cyclo(a))] for x, a in sorted(self.entries.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def add(psi: SparseState, phi: SparseState, sign: int = 1) -> SparseState:
    t = max(psi.denom_exp, phi.denom_exp)
    out: dict = {}
    for st, s in ((psi, 1), (phi, sign)):
        f = s * 2 ** (t - st.denom_exp)
        for x, a in st.entries.items():
            out[x] = t_add(out.get(x, ZERO_T), t_scale(a, f))
    return SparseState(out, t).prune()


def inner(psi: SparseState, phi: SparseState) -> Cyclo:
    """<psi|phi> exactly."""
    acc = ZERO_T
    small, big = (psi, phi) if len(psi) <= len(phi) else (phi, psi)
    for x in small.entries:
        b = big.entries.get(x)
        if b is None:
            continue
        acc = t_add(acc, t_mul(t_conj(psi.entries[x]), phi.entries[x]))
    return Cyclo(acc) * Fraction(1, 2 ** (psi.denom_exp + phi.denom_exp))


def norm2(psi: SparseState) -> Cyclo:
    return inner(psi, psi)


def norm2_by_entries(psi: SparseState) -> Cyclo:
    """Same quantity summed as per-entry |a|^2, used to cross-check :func:`norm2`."""
    total = Cyclo()
    for a in psi.entries.values():
        total = total + Cyclo(a).abs2()
    return total * Fraction(1, 4 ** psi.denom_exp)


def is_zero(psi: SparseState) -> bool:
    return not psi.entries


def states_equal(psi: SparseState, phi: SparseState) -> bool:
    return is_zero(add(psi, phi, -1))


def proportional(psi: SparseState, phi: SparseState) -> Cyclo | None:
    """c with phi == c * psi, or None."""
    if is_zero(psi):
        return Cyclo() if is_zero(phi) else None
    c = inner(psi, phi) / norm2(psi)
    if states_equal(psi.scaled(c), phi):
        return c
    return None


def fidelity(psi: SparseState, phi: SparseState) -> Cyclo:
    ov = inner(psi, phi)
    return ov.abs2() / (norm2(psi) * norm2(phi))


# ----------------------------------------------------------------------
# operator application


def apply_phase_poly(p: Poly, psi: SparseState) -> SparseState:
    return SparseState({x: t_rot(a, p(x)) for x, a in psi.entries.items()}, psi.denom_exp)


_COMPILED: dict = {}


def compiled(op: DiagOp, code: Code) -> Poly:
    key = (id(op), id(code))
    hit = _COMPILED.get(key)
    if hit is None or hit[0] is not op or hit[1] is not code:
        hit = (op, code, op.compile(code))
        _COMPILED[key] = hit
    return hit[2]


def apply_diag(op: DiagOp | Poly, psi: SparseState, code: Code | None = None, inverse: bool = False) -> SparseState:
    p = op if isinstance(op, Poly) else compiled(op, code)
    if inverse:
        p = -p
    return apply_phase_poly(p, psi)


def apply_cnot_layer(V: CnotLayer, psi: SparseState, code: Code) -> SparseState:
    return SparseState({V.apply(code, x): a for x, a in psi.entries.items()}, psi.denom_exp)


def apply_pauli(P: PhasedPauli, psi: SparseState) -> SparseState:
    out = {}
    for x, a in psi.entries.items():
        k, y = P.act(x)
        out[y] = t_rot(a, k)
    return SparseState(out, psi.denom_exp)


def apply_generator(S: StabilizerGenerator, psi: SparseState) -> SparseState:
    out: dict = {}
    for x, a in psi.entries.items():
        k, y = S.act(x)
        out[y] = t_add(out.get(y, ZERO_T), t_rot(a, k))
    return SparseState(out, psi.denom_exp).prune()


def apply_layer(layer, psi: SparseState, code: Code) -> SparseState:
    if isinstance(layer, CnotLayer):
        return apply_cnot_layer(layer, psi, code)
    if isinstance(layer, (DiagOp, Poly)):
        return apply_diag(layer, psi, code)
    if isinstance(layer, PhasedPauli):
        return apply_pauli(layer, psi)
    if isinstance(layer, StabilizerGenerator):
        return apply_generator(layer, psi)
    raise TypeError(f"cannot apply {type(layer).__name__}")


def apply_circuit(circuit: Sequence, psi: SparseState, code: Code) -> SparseState:
    """Apply layers in order (the first layer acts first)."""
    for layer in circuit:
        psi = apply_layer(layer, psi, code)
    return psi


def project(S, psi: SparseState, sign: int = 1) -> SparseState:
    """(1 + sign*S)/2 applied to psi."""
    img = apply_layer(S, psi, None) if not isinstance(S, StabilizerGenerator) else apply_generator(S, psi)
    out = add(psi, img, sign)
    out.denom_exp += 1
    return out


# ----------------------------------------------------------------------
# configurations


def enumerate_span(basis: Sequence[int], n_bits: int) -> np.ndarray:
    """All elements of an F_2 span as a uint64 array (object array beyond 64 bits)."""
    if n_bits <= 64:
        arr = np.zeros(1, dtype=np.uint64)
        for b in basis:
            arr = np.concatenate([arr, arr ^ np.uint64(b)])
        return arr
    out = [0]
    for b in basis:
        out = out + [x ^ b for x in out]
    return np.array(out, dtype=object)


def flat_configs(code: Code) -> np.ndarray:
    """Every configuration obeying all Z-type generators (flatness and boundary)."""
    return enumerate_span(code.flat_basis, code.n_qubits)


# ----------------------------------------------------------------------
# codespace


def sector_representative(code: Code, sector: Sequence[int]) -> int:
    rows = list(code.z_rows) + [p.z for p in code.logicals]
    rhs = [0] * len(code.z_rows) + [int(s) & 1 for s in sector]
    x = gf2.solve(rows, rhs)
    if x is None:
        raise SectorError(f"no flat configuration in logical sector {tuple(sector)}")
    return x


def project_codespace(code: Code, psi: SparseState, gens: Iterable | None = None) -> SparseState:
    for S in (code.x_generators if gens is None else gens):
        psi = project(S, psi)
    return psi


def codespace_basis(code: Code) -> list:
    """[(sector bits, projected state)] for every logical-Z sector."""
    out = []
    L = len(code.logicals)
    for bits_ in range(1 << L):
        sector = tuple((bits_ >> i) & 1 for i in range(L))
        x = sector_representative(code, sector)
        psi = project_codespace(code, SparseState.basis(x))
        if is_zero(psi):
            raise SectorError(f"logical sector {sector} projects to zero")
        out.append((sector, psi))
    return out


@dataclass
class LogicalMatrix:
    sectors: list
    entries: list  # rows of Cyclo
    norms: list

    def diagonal_exponents(self) -> list | None:
        n = len(self.entries)
        if any(self.entries[i][j] for i in range(n) for j in range(n) if i != j):
            return None
        return [self.entries[i][i].unit_power() for i in range(n)]

    def is_identity(self) -> bool:
        ex = self.diagonal_exponents()
        return ex is not None and all(k == 0 for k in ex)

    def to_json(self) -> dict:
        return {"sectors": [list(s) for s in self.sectors],
                "matrix": [[str(c) for c in row] for row in self.entries],
                "diagonal_exponents_mod16": self.diagonal_exponents()}


def logical_matrix(code: Code, circuit: Sequence, basis: list | None = None) -> LogicalMatrix:
    """Exact matrix of a circuit on the codespace basis; leakage is a hard error."""
    basis = basis or codespace_basis(code)
    norms = [norm2(b) for _, b in basis]
    cols = []
    for sb, b in basis:
        img = apply_circuit(circuit, b, code)
        coeffs = [inner(a, img) / na for (_, a), na in zip(basis, norms)]
        recon = SparseState({}, 0)
        for (_, a), c in zip(basis, coeffs):
            if c:
                recon = add(recon, a.scaled(c))
        resid = add(img, recon, -1)
        if not is_zero(resid):
            w = min(resid.entries)
            raise LeakageError(f"circuit leaks sector {sb} out of the code space", witness=w)
        cols.append(coeffs)
    n = len(basis)
    # norms agree across sectors for these codes; rescale otherwise is not needed
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    return LogicalMatrix([s for s, _ in basis], mat, norms)


# ----------------------------------------------------------------------
# measurement


def _threshold(rng: random.Random) -> Fraction:
    return Fraction(rng.getrandbits(128), 1 << 128)


def born_weight(num: Cyclo, den: Cyclo) -> Fraction | mpmath.mpf:
    if num.is_rational() and den.is_rational():
        return num.rational() / den.rational()
    with mpmath.workprec(128):
        return mpmath.re(num.to_mpc()) / mpmath.re(den.to_mpc())


def measure(obs, psi: SparseState, rng: random.Random, code: Code | None = None) -> tuple:
    """Projective measurement of an involutive observable.

    Returns ``(outcome, post_state, probability)`` with outcome +1 or -1 and
    the unnormalised post-measurement state ``(1 ± O)/2 psi``.
    """
    img = apply_layer(obs, psi, code)
    plus = add(psi, img, 1)
    plus.denom_exp += 1
    minus = add(psi, img, -1)
    minus.denom_exp += 1
    total = norm2(psi)
    p_plus = born_weight(norm2(plus), total) if not is_zero(plus) else Fraction(0)
    u = _threshold(rng)
    if is_zero(minus):
        return 1, plus, Fraction(1)
    if is_zero(plus):
        return -1, minus, Fraction(1)
    if isinstance(p_plus, Fraction):
        take_plus = u < p_plus
    else:
        with mpmath.workprec(128):
            take_plus = mpmath.mpf(u.numerator) / u.denominator < p_plus
    if take_plus:
        return 1, plus, p_plus
    return -1, minus, (1 - p_plus)


# ----------------------------------------------------------------------
# traces: codespace dimension and torus degeneracy


def generator_kernel(gens: Sequence[StabilizerGenerator]) -> list:
    """Basis of index subsets (bitmasks over ``gens``) whose X supports cancel."""
    width = max((g.x_mask.bit_length() for g in gens), default=0)
    rows = [g.x_mask | (1 << (width + i)) for i, g in enumerate(gens)]
    basis, pivots = gf2.rref(rows)
    out = []
    for b, p in zip(basis, pivots):
        if p >= width:
            out.append(b >> width)
    return out


def product_phase(gens: Sequence[StabilizerGenerator], subset: int, x: int) -> tuple:
    """Exponent and final configuration of the ordered product over ``subset``."""
    k = 0
    y = x
    for i in gf2.bits(subset):
        dk, y = gens[i].act(y)
        k += dk
    return k % MOD, y


@dataclass
class TraceResult:
    dimension: int
    kernel_size: int
    classes: int
    trace: Cyclo
    per_element: list

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "kernel_size": self.kernel_size, "classes": self.classes,
                "trace": str(self.trace), "per_element": self.per_element}


def codespace_dimension(code: Code) -> TraceResult:
    """Tr(P_code) through the stabilizer-product expansion.

    Only products with cancelling X support have a trace.  Each such product
    is diagonal, its phase is constant on gauge orbits within the flat
    subspace, so the sum over flat configurations collapses to one
    representative per class of flat configurations modulo gauge.
    """
    gens = code.x_generators
    ker = generator_kernel(gens)
    ker_elems = list(gf2.span(ker))
    classes = [int(c) for c in gf2.span(code.logical_classes())]
    total = ZERO_T
    per = []
    for T in ker_elems:
        acc = ZERO_T
        for x in classes:
            k, y = product_phase(gens, T, x)
            if y != x:
                raise AssertionError("kernel element with nonzero X support")
            acc = t_add(acc, t_rot(ONE_T, k))
        per.append({"subset_size": gf2.popcount(T), "sum": str(Cyclo(acc))})
        total = t_add(total, acc)
    tr = Cyclo(total) * Fraction(1, len(ker_elems))
    if not tr.is_rational() or tr.rational().denominator != 1:
        raise ArithmeticError(f"non-integer code-space trace {tr}")
    return TraceResult(int(tr.rational()), len(ker_elems), len(classes), tr, per)


def gsd(code: Code) -> int:
    if not code.complex.closed:
        raise ValueError("ground-state degeneracy is computed on closed complexes")
    return codespace_dimension(code).dimension
