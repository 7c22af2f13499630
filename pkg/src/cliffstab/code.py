"""Stabilizer groups of the twisted Z_2^N gauge-theory codes.

Qubits sit on (edge, colour) pairs, qubit index ``edge * C + colour_index``.
A Z-basis configuration is an int whose bits are those qubits.

X-type generators act as ``S|x> = zeta^{D(x)} |x xor m>`` with X-support
``m`` and a dressing exponent polynomial ``D`` (mod 16) evaluated *before*
the X layer.  The dressing of the single-colour generator at vertex ``v`` is
``pi * ∫ ω`` with the colour's slot in the twist ``ω`` replaced by ``v̂``.
Boundary vertices carry products of single-colour generators, chosen among
the colour combinations whose X-support respects the boundary Z constraints.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import gf2
from .complex import CellComplex
from .diagop import MOD, DiagOp, Hat, Term, cups, Field
from .poly import Poly

COLORS_2D = ("r", "g", "b")
COLORS_3D = ("r", "g", "b", "y")
COLORS_BILAYER = ("r", "g", "b", "r'", "g'", "b'")

# Twist ω as cup orderings of colours (each weighted by pi, i.e. 8 in zeta_16 units).
TWIST_2D = (("r", "g", "b"),)
TWIST_3D = (("r", "y", "b", "g"),)
TWIST_BILAYER = (("r", "g", "b"), ("r'", "g'", "b'"))

# Boundary conditions: each entry is a set of colours whose sum vanishes on the region.
BOUNDARY_2D = {"L_r": [("r",)], "L_b": [("b",)], "L_rb": [("r", "b"), ("g",)]}
BOUNDARY_3D = {
    "bdry1": [("b",)],
    "bdry2": [("r",)],
    "bdry3": [("g",)],
    "bdry4": [("r", "g", "b"), ("y",)],
}
BOUNDARY_BILAYER = {
    "L_r": [("r",), ("r'",)],
    "L_b": [("b",), ("b'",)],
    "L_rb": [("r", "b'"), ("b", "r'"), ("g", "g'")],
}


@dataclass(frozen=True)
class PhasedPauli:
    """``zeta^phase X^x Z^z`` (Z acts first)."""

    x: int = 0
    z: int = 0
    phase: int = 0
    name: str = ""

    def act(self, config: int) -> tuple:
        """Return (exponent, new configuration)."""
        k = self.phase + (8 if gf2.parity(self.z & config) else 0)
        return k % MOD, config ^ self.x


@dataclass
class StabilizerGenerator:
    """A Z-type parity check or an X-type (dressed) gauge generator.

    For X-type: ``x_mask`` is the X support and ``phase`` the dressing
    exponent polynomial; ``colors`` the colour combination; ``dressing`` the
    symbolic DiagOp for single-colour generators.  For Z-type: ``z_mask``.
    """

    kind: str
    anchor: tuple
    colors: tuple
    x_mask: int = 0
    z_mask: int = 0
    phase: Poly = field(default_factory=Poly)
    dressing: DiagOp | None = None
    factors: tuple = ()

    @property
    def label(self) -> str:
        col = "".join(c for c in self.colors)
        return f"S_{self.kind}^{col}@{self.anchor[0]}{self.anchor[1]}"

    def act(self, config: int) -> tuple:
        if self.kind == "Z":
            return (8 if gf2.parity(self.z_mask & config) else 0), config
        return self.phase(config) % MOD, config ^ self.x_mask

    def act_batch(self, xs: np.ndarray) -> tuple:
        if self.kind == "Z":
            par = _parity_batch(xs, self.z_mask)
            return 8 * par, xs
        ph = self.phase.evaluate_batch(xs) % MOD
        if xs.dtype == object:
            return ph, np.array([int(x) ^ self.x_mask for x in xs], dtype=object)
        return ph, xs ^ np.uint64(self.x_mask)

    def to_json(self, code=None) -> dict:
        out = {"kind": self.kind, "anchor": list(self.anchor), "colors": list(self.colors)}
        if code is not None:
            out["x_support"] = [list(code.edge_color(q)) for q in gf2.bits(self.x_mask)]
            out["z_support"] = [list(code.edge_color(q)) for q in gf2.bits(self.z_mask)]
        else:
            out["x_mask"] = hex(self.x_mask)
            out["z_mask"] = hex(self.z_mask)
        if self.dressing is not None:
            out["dressing"] = self.dressing.to_json()
        if self.factors:
            out["factors"] = [list(f) for f in self.factors]
        out["dressing_monomials"] = len(self.phase.t)
        return out


def _parity_batch(xs: np.ndarray, mask: int) -> np.ndarray:
    if xs.dtype == object:
        return np.array([gf2.parity(int(x) & mask) for x in xs], dtype=np.int64)
    v = xs & np.uint64(mask)
    out = np.zeros(len(xs), dtype=np.int64)
    while True:
        nz = v != 0
        if not nz.any():
            break
        out ^= (v & np.uint64(1)).astype(np.int64)
        v = v >> np.uint64(1)
    return out


@dataclass
class Code:
    family: str
    complex: CellComplex
    colors: tuple
    twist: tuple
    generators: list
    boundary_spec: dict
    logicals: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    # qubit indexing ----------------------------------------------------
    @property
    def n_edges(self) -> int:
        return self.complex.n(1)

    @property
    def n_qubits(self) -> int:
        return self.n_edges * len(self.colors)

    def qubit(self, e: int, color: str) -> int:
        return e * len(self.colors) + self.colors.index(color)

    def edge_color(self, q: int) -> tuple:
        return q // len(self.colors), self.colors[q % len(self.colors)]

    def color_mask(self, color: str) -> int:
        m = 0
        for e in range(self.n_edges):
            m |= 1 << self.qubit(e, color)
        return m

    # generator views ---------------------------------------------------
    @property
    def x_generators(self) -> list:
        return [g for g in self.generators if g.kind == "X"]

    @property
    def z_generators(self) -> list:
        return [g for g in self.generators if g.kind == "Z"]

    @cached_property
    def z_rows(self) -> list:
        return [g.z_mask for g in self.z_generators]

    @cached_property
    def flat_basis(self) -> list:
        """Basis of configurations satisfying every Z-type generator."""
        return gf2.nullspace(self.z_rows, self.n_qubits)

    @cached_property
    def gauge_basis(self) -> list:
        basis, _ = gf2.rref([g.x_mask for g in self.x_generators])
        return basis

    def logical_classes(self) -> list:
        """Coset representatives of flat configurations modulo the gauge span."""
        gb, gp = gf2.rref(self.gauge_basis)
        reps: list = []
        rb: list = []
        rp: list = []
        for f in self.flat_basis:
            r = gf2.reduce(f, gb, gp)
            r = gf2.reduce(r, rb, rp)
            if r:
                reps.append(f)
                rb, rp = gf2.rref(rb + [r])
        return reps

    def fields_of(self, xs) -> dict:
        """Per-colour edge values for one config (int) or a batch of configs."""
        C = len(self.colors)
        out = {}
        if isinstance(xs, (int, np.integer)):
            x = int(xs)
            for ci, c in enumerate(self.colors):
                out[c] = np.array([(x >> (e * C + ci)) & 1 for e in range(self.n_edges)], dtype=np.int64)
            return out
        xs = np.asarray(xs)
        for ci, c in enumerate(self.colors):
            rows = []
            for e in range(self.n_edges):
                q = e * C + ci
                if xs.dtype == object:
                    rows.append(np.array([(int(x) >> q) & 1 for x in xs], dtype=np.int64))
                else:
                    rows.append(((xs >> np.uint64(q)) & np.uint64(1)).astype(np.int64))
            out[c] = np.array(rows, dtype=np.int64).reshape(self.n_edges, len(xs))
        return out

    def config_of(self, values: dict) -> int:
        x = 0
        for c, arr in values.items():
            for e, v in enumerate(np.asarray(arr).ravel()):
                if int(v) % 2:
                    x |= 1 << self.qubit(e, c)
        return x

    def vertex_generators(self, v: int) -> list:
        return [g for g in self.x_generators if g.anchor == ("v", v)]

    def single_color_generator(self, v: int, color: str) -> StabilizerGenerator:
        """The untruncated-rule single-colour generator (may break boundary constraints)."""
        return _single_generator(self, v, color)

    def product(self, gens: Sequence[StabilizerGenerator], anchor=None) -> StabilizerGenerator:
        """Operator product ``gens[-1] ... gens[0]`` (the first factor acts first)."""
        phase = Poly()
        m = 0
        cols: list = []
        for g in gens:
            phase = phase + g.phase.flip(m)
            m ^= g.x_mask
            cols.extend(g.colors)
        return StabilizerGenerator("X", anchor or gens[0].anchor, tuple(cols), x_mask=m, phase=phase % MOD,
                                   factors=tuple((g.anchor[1], "".join(g.colors)) for g in gens))

    def generator_for_combo(self, v: int, combo: Sequence[str]) -> StabilizerGenerator:
        """Product of single-colour generators at ``v`` in colour order."""
        ordered = [c for c in self.colors if c in combo]
        return self.product([self.single_color_generator(v, c) for c in ordered], anchor=("v", v))

    # serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "family": self.family,
            "complex": self.complex.name,
            "colors": list(self.colors),
            "twist": [list(t) for t in self.twist],
            "n_qubits": self.n_qubits,
            "boundary_spec": {k: [list(c) for c in v] for k, v in self.boundary_spec.items()},
            "generators": [g.to_json(self) for g in self.generators],
            "logicals": [{"name": p.name, "z_support": [list(self.edge_color(q)) for q in gf2.bits(p.z)]}
                         for p in self.logicals],
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True)


# ----------------------------------------------------------------------
# construction


def _dressing_op(code: Code, v: int, color: str) -> DiagOp:
    terms = []
    for order in code.twist:
        if color not in order:
            continue
        slots = [Hat(0, v) if c == color else Field(c, lifted=False) for c in order]
        terms.append(Term(8, "bulk", cups(*slots)))
    return DiagOp(terms, name=f"dressing[{color}@v{v}]")


_SINGLE_CACHE: dict = {}


def _single_generator(code: Code, v: int, color: str) -> StabilizerGenerator:
    key = (id(code), v, color)
    hit = _SINGLE_CACHE.get(key)
    if hit is not None and hit[0] is code:
        return hit[1]
    cx = code.complex
    m = 0
    for e, c in enumerate(cx.cells[1]):
        if v in c.vertices:
            m |= 1 << code.qubit(e, color)
    op = _dressing_op(code, v, color)
    gen = StabilizerGenerator("X", ("v", v), (color,), x_mask=m, phase=op.compile(code), dressing=op)
    _SINGLE_CACHE[key] = (code, gen)
    return gen


def _combo_order(colors: Sequence[str]) -> list:
    """Candidate colour combinations: by size, consecutive colours first."""
    n = len(colors)
    out = []
    for k in range(1, n + 1):
        combos = list(itertools.combinations(range(n), k))
        combos.sort(key=lambda c: (0 if all(c[i + 1] == c[i] + 1 for i in range(k - 1)) else 1, c))
        out.extend(tuple(colors[i] for i in c) for c in combos)
    return out


def _boundary_z_generators(code: Code) -> list:
    cx = code.complex
    out = []
    for region, constraints in code.boundary_spec.items():
        if region not in cx.regions:
            continue
        for e in sorted(cx.regions[region].get(1, ())):
            for cons in constraints:
                z = 0
                for c in cons:
                    z |= 1 << code.qubit(e, c)
                out.append(StabilizerGenerator("Z", ("e", e), tuple(cons), z_mask=z))
    return out


def _face_z_generators(code: Code) -> list:
    cx = code.complex
    out = []
    if cx.dim < 2:
        return out
    for f, fl in enumerate(cx.faces[2]):
        for c in code.colors:
            z = 0
            for e, _ in fl:
                z ^= 1 << code.qubit(e, c)
            if z:
                out.append(StabilizerGenerator("Z", ("f", f), (c,), z_mask=z))
    return out


def _assemble(family: str, cx: CellComplex, colors: tuple, twist: tuple, bspec: dict) -> Code:
    code = Code(family, cx, colors, twist, [], {k: v for k, v in bspec.items() if k in cx.regions})
    zgens = _face_z_generators(code) + _boundary_z_generators(code)
    code.generators = list(zgens)
    zrows = [g.z_mask for g in zgens if g.anchor[0] == "e"]
    candidates = _combo_order(colors)
    for v in range(cx.n(0)):
        col_masks = {}
        for c in colors:
            m = 0
            for e, cell in enumerate(cx.cells[1]):
                if v in cell.vertices:
                    m |= 1 << code.qubit(e, c)
            col_masks[c] = m
        chosen: list = []
        chosen_vecs: list = []
        for combo in candidates:
            m = 0
            for c in combo:
                m ^= col_masks[c]
            if any(gf2.parity(z & m) for z in zrows):
                continue
            vec = gf2.mask_of(colors.index(c) for c in combo)
            if gf2.in_span(vec, chosen_vecs):
                continue
            chosen.append(combo)
            chosen_vecs.append(vec)
        for combo in chosen:
            if len(combo) == 1:
                code.generators.append(_single_generator(code, v, combo[0]))
            else:
                code.generators.append(code.generator_for_combo(v, combo))
    return code


def build_2d_code(cx: CellComplex, twisted: bool = True) -> Code:
    """The Z_2^3 code on a 2D complex (closed, or a triangle with L_r, L_b, L_rb).

    ``twisted=False`` drops the cup-product dressing, giving three decoupled
    toric codes.
    """
    if cx.dim != 2:
        raise ValueError("2D code needs a 2-dimensional complex")
    if not cx.closed and not all(r in cx.regions for r in BOUNDARY_2D):
        raise ValueError("bounded 2D complex must carry regions L_r, L_b, L_rb")
    code = _assemble("2d", cx, COLORS_2D, TWIST_2D if twisted else (), BOUNDARY_2D)
    if "L_rb" in cx.regions:
        code.logicals = [logical_Z(code)[0]]
    return code


def build_3d_code(cx: CellComplex) -> Code:
    """The Z_2^4 code on a 3D complex (closed, or the tetrahedron with bdry1..4)."""
    if cx.dim != 3:
        raise ValueError("3D code needs a 3-dimensional complex")
    if not cx.closed and not all(r in cx.regions for r in BOUNDARY_3D):
        raise ValueError("bounded 3D complex must carry regions bdry1..bdry4")
    code = _assemble("3d", cx, COLORS_3D, TWIST_3D, BOUNDARY_3D)
    code.notes.append("S_X^y carries X^y in its Pauli layer (colour of the listed X^b read as y)")
    if "hinge_1_4" in cx.regions:
        code.logicals = [logical_Z(code)[0]]
    return code


def build_bilayer_cs_code(cx: CellComplex) -> Code:
    """Two 2D copies on one triangle with boundaries (1)=L_r, (2)=L_b, (3)=L_rb."""
    if cx.dim != 2 or not all(r in cx.regions for r in BOUNDARY_BILAYER):
        raise ValueError("bilayer code needs a 2D triangle with L_r, L_b, L_rb")
    code = _assemble("bilayer", cx, COLORS_BILAYER, TWIST_BILAYER, BOUNDARY_BILAYER)
    code.logicals = logical_Z(code)
    return code


def logical_Z(code: Code) -> list:
    """Canonical boundary-holonomy logical Z strings."""
    cx = code.complex

    def string(region, color, name):
        z = 0
        for e in sorted(cx.region_sign[region]):
            z |= 1 << code.qubit(e, color)
        return PhasedPauli(z=z, name=name)

    if code.family == "2d":
        return [string("L_rb", "r", "Z_L (Z^r along L_rb)")]
    if code.family == "3d":
        return [string("hinge_1_4", "r", "Z_L (Z^r along hinge_1_4)")]
    if code.family == "bilayer":
        return [string("L_rb", "r", "n_r (Z^r = Z'^b along L_rb)"),
                string("L_rb", "b", "n_b (Z^b = Z'^r along L_rb)")]
    return []


def find_logical_Z(code: Code) -> list:
    """Z strings commuting with every X support, modulo Z stabilizers (F_2 oracle)."""
    n = code.n_qubits
    comm = gf2.nullspace([g.x_mask for g in code.x_generators], n)
    zb, zp = gf2.rref(code.z_rows)
    out: list = []
    ob: list = []
    op: list = []
    for z in comm:
        r = gf2.reduce(gf2.reduce(z, zb, zp), ob, op)
        if r:
            out.append(z)
            ob, op = gf2.rref(ob + [r])
    return out


# ----------------------------------------------------------------------
# general-N family


@dataclass
class CodeFamilySpec:
    N: int
    spatial_dim: int
    colors: tuple
    twist: str
    dressing_level: int
    z_stabilizers: str
    x_stabilizers: str
    automorphism: str
    logical_gate: str

    def instantiate(self, cx: CellComplex) -> Code:
        if self.N == 3:
            return build_2d_code(cx)
        if self.N == 4:
            return build_3d_code(cx)
        raise NotImplementedError(f"N={self.N} is available as a descriptor only")

    def to_json(self) -> dict:
        return dict(self.__dict__, colors=list(self.colors))


def general_N_descriptor(N: int) -> CodeFamilySpec:
    if N < 3:
        raise ValueError("family starts at N = 3")
    colors = {3: COLORS_2D, 4: COLORS_3D}.get(N, tuple(f"a{k}" for k in range(1, N + 1)))
    gates = {3: "T", 4: "√T", 5: "T^{1/4}"}
    return CodeFamilySpec(
        N=N,
        spatial_dim=N - 1,
        colors=tuple(colors),
        twist="(-1)^{∫ a_1 ∪ ... ∪ a_N}",
        dressing_level=N - 1,
        z_stabilizers="flatness Z^c around every 2-cell (unchanged)",
        x_stabilizers=f"vertex X^c layers dressed by C^{N - 2}Z gates (level {N - 1})",
        automorphism="a_1 -> a_1 + a_2 + ... + a_N via transversal CNOT",
        logical_gate=gates.get(N, f"diag(1, e^{{2πi/2^{N}}})"),
    )
