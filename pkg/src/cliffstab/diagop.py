"""Diagonal phase operators built from cup-product expressions.

A :class:`DiagOp` is a sum of terms ``coeff * integral_region expr(a)`` whose
value is an exponent of zeta = exp(2 pi i / 16).  Every gauge field enters
through its integer lift (values 0 and 1), so a term's integrand is an
integer polynomial in the qubit bits and the exponent is exact for *every*
basis configuration, flat or not.  The usual phase units are

====  ==================  =========
coef  continuum factor    gate unit
====  ==================  =========
8     pi * (Z_2 cochain)  Z
4     pi/2                S
2     pi/4                T
1     pi/8                sqrt(T)
====  ==================  =========

The transversal CNOT layer ``V`` lives here as well, together with the
compiler that turns a DiagOp into a gate list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .cochain import Cochain, coboundary, cup, cup1, half, integrate
from .cyclotomic import ORDER, phase_str
from .gf2 import bits
from .poly import NonMonomializable, Poly

MOD = ORDER


# ----------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class Field:
    """Gauge field of one colour; ``lifted`` marks the Z_{2^k} lift (display only)."""

    color: str
    lifted: bool = True

    def __str__(self):
        return f"ã_{self.color}" if self.lifted else f"a_{self.color}"


@dataclass(frozen=True)
class Hat:
    """Indicator cochain of one cell (``v̂`` for a vertex, ``ê`` for an edge)."""

    dim: int
    index: int

    def __str__(self):
        return ("v̂" if self.dim == 0 else "ê") + f"[{self.index}]"


@dataclass(frozen=True)
class Cup:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} ∪ {self.right})"


@dataclass(frozen=True)
class Cup1:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} ∪₁ {self.right})"


@dataclass(frozen=True)
class D:
    inner: object

    def __str__(self):
        return f"d{self.inner}"


@dataclass(frozen=True)
class Half:
    inner: object

    def __str__(self):
        return f"({self.inner})/2"


def cups(*nodes) -> object:
    out = nodes[0]
    for n in nodes[1:]:
        out = Cup(out, n)
    return out


def fields(*colors: str, lifted: bool = True) -> list:
    return [Field(c, lifted) for c in colors]


def tree_json(node) -> object:
    if isinstance(node, Field):
        return {"field": node.color, "lifted": node.lifted}
    if isinstance(node, Hat):
        return {"hat": [node.dim, node.index]}
    name = type(node).__name__.lower()
    if isinstance(node, (Cup, Cup1)):
        return {name: [tree_json(node.left), tree_json(node.right)]}
    return {name: tree_json(node.inner)}


def _degree(node) -> int:
    if isinstance(node, Field):
        return 1
    if isinstance(node, Hat):
        return node.dim
    if isinstance(node, Cup):
        return _degree(node.left) + _degree(node.right)
    if isinstance(node, Cup1):
        return _degree(node.left) + _degree(node.right) - 1
    if isinstance(node, D):
        return _degree(node.inner) + 1
    return _degree(node.inner)


def evaluate_expr(node, cx, env: Mapping[str, Cochain]) -> Cochain:
    """Evaluate an expression tree; ``env`` maps colours to degree-1 cochains."""
    if isinstance(node, Field):
        return env[node.color]
    if isinstance(node, Hat):
        like = next(iter(env.values())).values
        shape = (cx.n(node.dim),) + like.shape[1:]
        if like.dtype == object:
            vals = np.zeros(shape, dtype=object)
        else:
            vals = np.zeros(shape, dtype=np.int64)
        vals[node.index] = 1
        return Cochain(cx, node.dim, MOD, vals)
    if isinstance(node, Cup):
        return cup(evaluate_expr(node.left, cx, env), evaluate_expr(node.right, cx, env))
    if isinstance(node, Cup1):
        return cup1(evaluate_expr(node.left, cx, env), evaluate_expr(node.right, cx, env))
    if isinstance(node, D):
        return coboundary(evaluate_expr(node.inner, cx, env))
    if isinstance(node, Half):
        h = half(evaluate_expr(node.inner, cx, env))
        return Cochain(cx, h.degree, MOD, h.values)
    raise TypeError(f"unknown expression node {node!r}")


# ----------------------------------------------------------------------
# diagonal operators


@dataclass(frozen=True)
class Term:
    coeff: int
    region: str
    expr: object

    def __str__(self):
        where = "" if self.region == "bulk" else f"_{{{self.region}}}"
        return f"{self.coeff % MOD}·∫{where} {self.expr}"


@dataclass
class DiagOp:
    """``exp(2 pi i / 16 * sum_t coeff_t * integral_t)`` on gauge configurations."""

    terms: list
    name: str = ""
    modulus: int = MOD

    def eval(self, cx, env: Mapping[str, np.ndarray]) -> np.ndarray | int:
        """Exponent mod 16 for per-colour edge values (shape (E,) or (E, batch))."""
        envc = {c: Cochain(cx, 1, MOD, np.asarray(v)) for c, v in env.items()}
        total = 0
        for t in self.terms:
            val = integrate(evaluate_expr(t.expr, cx, envc), t.region)
            total = total + t.coeff * val
        if isinstance(total, np.ndarray):
            return np.mod(total, MOD)
        return int(total) % MOD

    def compile(self, code) -> Poly:
        """Exponent as a multilinear integer polynomial in the code's qubit bits."""
        cx = code.complex
        env = {}
        for c in code.colors:
            vals = np.empty(cx.n(1), dtype=object)
            for e in range(cx.n(1)):
                vals[e] = Poly.var(code.qubit(e, c))
            env[c] = Cochain(cx, 1, MOD, vals)
        total = Poly()
        for t in self.terms:
            try:
                val = integrate(evaluate_expr(t.expr, cx, env), t.region)
            except NonMonomializable as exc:
                raise NonMonomializable(f"term {t} has no monomial form: {exc}") from exc
            total = total + Poly._as(val) * t.coeff
        return total % MOD

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "modulus": self.modulus,
            "terms": [{"coeff": t.coeff % MOD, "region": t.region, "expr": tree_json(t.expr)} for t in self.terms],
        }


# ----------------------------------------------------------------------
# the transversal CNOT layer


@dataclass
class CnotLayer:
    """Transversal CNOTs ``(control, target)`` applied on every edge."""

    pairs: list
    colors: tuple

    def color_map(self) -> np.ndarray:
        """F_2 matrix M with new_bits = M @ old_bits on each edge's colour vector."""
        n = len(self.colors)
        m = np.eye(n, dtype=np.int64)
        for c, t in self.pairs:
            ci, ti = self.colors.index(c), self.colors.index(t)
            step = np.eye(n, dtype=np.int64)
            step[ti, ci] = 1
            m = (step @ m) % 2
        return m

    def x_image(self) -> np.ndarray:
        """Column ``c``: colours carrying X after conjugating ``X^c`` (same as the bit map)."""
        return self.color_map()

    def z_image(self) -> np.ndarray:
        """Column ``c``: colours carrying Z after conjugating ``Z^c``."""
        return np.linalg.inv(self.color_map()).T.round().astype(np.int64) % 2

    def masks(self, code) -> list:
        """Per pair: (control mask, bit shift to target)."""
        out = []
        for c, t in self.pairs:
            cm = 0
            for e in range(code.n_edges):
                cm |= 1 << code.qubit(e, c)
            out.append((cm, code.colors.index(t) - code.colors.index(c)))
        return out

    def apply(self, code, x):
        """Image of a configuration (int or uint64 array) under the layer."""
        for cm, sh in self.masks(code):
            if isinstance(x, np.ndarray) and x.dtype != object:
                sel = x & np.uint64(cm)
                x = x ^ (sel << np.uint64(sh) if sh >= 0 else sel >> np.uint64(-sh))
            else:
                sel = x & cm
                x = x ^ (sel << sh if sh >= 0 else sel >> -sh)
        return x

    def describe(self) -> list:
        return [f"CNOT^({c},{t})" for c, t in self.pairs]

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "colors": list(self.colors)}


def build_V(code) -> CnotLayer:
    """The transversal automorphism layer for a code family.

    2D: CNOT^(r,g) CNOT^(b,g); 3D: CNOT^(r,y) CNOT^(g,y) CNOT^(b,y);
    bilayer: the 2D layer on both copies.
    """
    fam = code.family
    if fam == "2d":
        pairs = [("r", "g"), ("b", "g")]
    elif fam == "3d":
        pairs = [("r", "y"), ("g", "y"), ("b", "y")]
    elif fam == "bilayer":
        pairs = [("r", "g"), ("b", "g"), ("r'", "g'"), ("b'", "g'")]
    else:
        raise ValueError(f"no automorphism layer for family {fam!r}")
    return CnotLayer(pairs, tuple(code.colors))


# ----------------------------------------------------------------------
# W operators


def _boundary_names(code) -> set:
    return set(code.complex.regions)


def build_W_2d(code) -> DiagOp:
    """exp(pi i ∫ ã_r∪ã_b / 2 - pi i ∫_{L_rb} ã_r / 4); boundary term only if present."""
    r, b = fields("r", "b")
    terms = [Term(4, "bulk", Cup(r, b))]
    if "L_rb" in _boundary_names(code):
        terms.append(Term(-2, "L_rb", r))
    return DiagOp(terms, name="W_2d")


def build_W_3d(code) -> DiagOp:
    """Bulk CCS plus Z_2 ∪₁ correction, CT† on bdry4 and √T on hinge_1_4."""
    r, g, b = fields("r", "g", "b")
    ar, ag, ab = fields("r", "g", "b", lifted=False)
    terms = [
        Term(4, "bulk", cups(r, b, g)),
        Term(8, "bulk", cups(ar, Cup1(ag, ab), ag)),
    ]
    names = _boundary_names(code)
    if "bdry4" in names:
        terms.append(Term(-2, "bdry4", Cup(r, g)))
    if "hinge_1_4" in names:
        terms.append(Term(1, "hinge_1_4", r))
    return DiagOp(terms, name="W_3d")


def build_W_bilayer(code) -> DiagOp:
    """i^{∫ã_r∪ã_b} i^{∫ã'_r∪ã'_b} i^{-∫_{L_rb} ã_r∪₁ã_b}."""
    r, b, rp, bp = fields("r", "b", "r'", "b'")
    terms = [Term(4, "bulk", Cup(r, b)), Term(4, "bulk", Cup(rp, bp))]
    if "L_rb" in _boundary_names(code):
        terms.append(Term(-4, "L_rb", Cup1(r, b)))
    return DiagOp(terms, name="W_bilayer")


def build_W(code) -> DiagOp:
    return {"2d": build_W_2d, "3d": build_W_3d, "bilayer": build_W_bilayer}[code.family](code)


def alpha_terms(N: int, labels: Sequence[str] | None = None) -> list:
    """Closed-manifold trivialisation α for ``a_1 -> a_1 + ... + a_N``.

    ``labels[k]`` names the field ``a_{k+1}``; the result lists Terms over
    the bulk with the first summand at coefficient 4 and every ∪₁-corrected
    summand at coefficient 8.
    """
    if not 3 <= N <= 5:
        raise ValueError("general-N operator available for 3 <= N <= 5")
    labels = list(labels or [f"a{k}" for k in range(1, N + 1)])
    lifted = [Field(c) for c in labels]
    plain = [Field(c, lifted=False) for c in labels]
    terms = [Term(4, "bulk", cups(*lifted[1:]))]
    for i in range(3, N + 1):
        for j in range(2, i):
            slots = []
            for k in range(2, N + 1):
                if k == j:
                    slots.append(Cup1(plain[i - 1], plain[j - 1]))
                else:
                    slots.append(plain[k - 1])
            terms.append(Term(8, "bulk", cups(*slots)))
    return terms


def build_W_generalN(N: int, labels: Sequence[str] | None = None) -> DiagOp:
    return DiagOp(alpha_terms(N, labels), name=f"alpha_N{N}")


# ----------------------------------------------------------------------
# gate compilation

_BASE = {8: "Z", 4: "S", 12: "S†", 2: "T", 14: "T†", 1: "√T", 15: "√T†"}


def _split(c: int) -> list:
    """Write an exponent as a short sum of base gate exponents."""
    c %= MOD
    if c == 0:
        return []
    if c in _BASE:
        return [c]
    for a in _BASE:
        if (c - a) % MOD in _BASE:
            return [a, (c - a) % MOD]
    for a in _BASE:
        for b in _BASE:
            if (c - a - b) % MOD in _BASE:
                return [a, b, (c - a - b) % MOD]
    raise AssertionError("unreachable: every residue is a sum of three base exponents")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple
    exponent: int

    def phase(self, x: int) -> int:
        return self.exponent if all((x >> q) & 1 for q in self.qubits) else 0


def poly_to_gates(p: Poly) -> list:
    """Diagonal gates whose product has exponent ``p`` on every basis state."""
    out = []
    for mask, c in sorted((p % MOD).items(), key=lambda kv: (bin(kv[0]).count("1"), kv[0])):
        qs = tuple(bits(mask))
        if not qs:
            # a constant is a global phase; keep it as an explicit gate-free record
            out.append(Gate("phase", (), c % MOD))
            continue
        for part in _split(c):
            out.append(Gate("C" * (len(qs) - 1) + _BASE[part], qs, part))
    return out


def compile_to_gates(op: DiagOp, code) -> list:
    return poly_to_gates(op.compile(code))


def gates_phase(gates: Sequence[Gate], x: int) -> int:
    return sum(g.phase(x) for g in gates) % MOD


def gates_phase_batch(gates: Sequence[Gate], xs: np.ndarray) -> np.ndarray:
    out = np.zeros(len(xs), dtype=np.int64)
    for g in gates:
        m = 0
        for q in g.qubits:
            m |= 1 << q
        if xs.dtype == object:
            hit = np.array([(int(x) & m) == m for x in xs])
        else:
            hit = (xs & np.uint64(m)) == np.uint64(m)
        out += g.exponent * hit
    return out % MOD


def gates_json(gates: Sequence[Gate], code) -> str:
    rows = []
    for g in gates:
        rows.append({"gate": g.name, "qubits": [list(code.edge_color(q)) for q in g.qubits]})
    return json.dumps(rows, ensure_ascii=False)


def gate_summary(gates: Sequence[Gate], code) -> dict:
    """Count gates by (name, region label of their edges)."""
    counts: dict = {}
    cx = code.complex
    for g in gates:
        labels = set()
        for q in g.qubits:
            e, _ = code.edge_color(q)
            labels.update(cx.label(1, e))
        key = f"{g.name}@{'+'.join(sorted(labels)) or 'global'}"
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


def exponent_str(k: int) -> str:
    return phase_str(k)
