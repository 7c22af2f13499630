"""Branched cell complexes: simplicial patches and tori, cubical lattices.

Cells are identified by a translation-canonical key so that periodic
complexes of very small size (where distinct cells share vertex sets) stay
well defined as Delta-complexes:

* simplicial cell: ``(base, diffs)`` where ``base`` is the first vertex
  (reduced modulo the periods) and ``diffs`` are the offsets of the remaining
  vertices from it, in branching order;
* cubical cell: ``(corner, axes)`` with ``corner`` the minimal corner.

The branching order inside every simplex is increasing lexicographic order of
the (unwrapped) integer coordinates.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SIMPLICIAL = "simplicial"
CUBICAL = "cubical"
KINDS = (SIMPLICIAL, CUBICAL)

Point = tuple


@dataclass(frozen=True)
class Cell:
    """One cell of a complex.

    ``vertices`` lists vertex indices in branching order (for cubes: binary
    order of the local coordinates along ``axes``).  ``points`` holds the
    unwrapped integer coordinates of those vertices.
    """

    id: int
    dim: int
    vertices: tuple
    points: tuple
    key: tuple
    corner: tuple | None = None
    axes: tuple | None = None


@dataclass
class CellComplex:
    kind: str
    dim: int
    periods: tuple | None
    cells: list = field(default_factory=list)
    index: list = field(default_factory=list)
    faces: list = field(default_factory=list)
    orientation: np.ndarray | None = None
    regions: dict = field(default_factory=dict)
    region_dim: dict = field(default_factory=dict)
    region_sign: dict = field(default_factory=dict)
    name: str = ""

    # ------------------------------------------------------------------
    def n(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d <= self.dim else 0

    @property
    def counts(self) -> tuple:
        return tuple(self.n(d) for d in range(self.dim + 1))

    def euler(self) -> int:
        return sum((-1) ** d * self.n(d) for d in range(self.dim + 1))

    @property
    def closed(self) -> bool:
        return not self.boundary_chain()

    def canon(self, p: Sequence[int]) -> Point:
        if self.periods is None:
            return tuple(p)
        return tuple(int(x) % L for x, L in zip(p, self.periods))

    def simplex_key(self, pts: Sequence[Point]) -> tuple:
        p0 = pts[0]
        return (self.canon(p0), tuple(tuple(b - a for a, b in zip(p0, q)) for q in pts[1:]))

    def cube_key(self, corner: Sequence[int], axes: Sequence[int]) -> tuple:
        return (self.canon(corner), tuple(axes))

    def lookup(self, d: int, key: tuple) -> int:
        return self.index[d][key]

    def subsimplex(self, d: int, i: int, positions: Sequence[int]) -> int:
        """Index of the face of simplex (d, i) spanned by the given vertex positions."""
        pts = self.cells[d][i].points
        return self.index[len(positions) - 1][self.simplex_key([pts[j] for j in positions])]

    def subcube(self, corner: Sequence[int], axes: Sequence[int]) -> int:
        return self.index[len(axes)][self.cube_key(corner, axes)]

    # ------------------------------------------------------------------
    def boundary_matrix(self, d: int) -> np.ndarray:
        """Signed incidence matrix of shape (n(d-1), n(d))."""
        m = np.zeros((self.n(d - 1), self.n(d)), dtype=np.int64)
        for i, fl in enumerate(self.faces[d]):
            for j, s in fl:
                m[j, i] += s
        return m

    def boundary_chain(self, region: str | None = None) -> dict:
        """Boundary of the oriented fundamental chain (of a region if given).

        Returns a map ``cell index -> coefficient`` on cells one dimension
        below the chain, omitting zeros.
        """
        if region is None:
            d = self.dim
            chain = {i: int(self.orientation[i]) for i in range(self.n(d))}
        else:
            d = self.region_dim[region]
            chain = dict(self.region_sign[region])
        out: dict = {}
        for i, c in chain.items():
            for j, s in self.faces[d][i]:
                out[j] = out.get(j, 0) + c * s
        return {j: v for j, v in out.items() if v}

    def in_region(self, name: str, d: int, i: int) -> bool:
        return i in self.regions.get(name, {}).get(d, ())

    def label(self, d: int, i: int) -> list:
        """Region labels of a cell; ``['bulk']`` if it lies on no boundary."""
        names = [r for r in sorted(self.regions) if self.in_region(r, d, i)]
        return names or ["bulk"]

    def region_names(self) -> list:
        return sorted(self.regions)

    def edge_id(self, a: Point, b: Point) -> int:
        """Index of the edge from lattice point ``a`` to ``b`` (either kind)."""
        a, b = tuple(a), tuple(b)
        if a > b:
            a, b = b, a
        if self.kind == SIMPLICIAL:
            return self.index[1][self.simplex_key([a, b])]
        diff = [y - x for x, y in zip(a, b)]
        axis = [k for k, v in enumerate(diff) if v]
        if len(axis) != 1 or diff[axis[0]] != 1:
            raise KeyError(f"no unit edge between {a} and {b}")
        return self.index[1][self.cube_key(a, axis)]

    def vertex_id(self, p: Point) -> int:
        return self.index[0][self.simplex_key([tuple(p)])]

    # ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "name": self.name,
            "periods": list(self.periods) if self.periods else None,
            "counts": list(self.counts),
            "cells": [
                [{"id": c.id, "vertices": list(c.vertices), "points": [list(p) for p in c.points]} for c in self.cells[d]]
                for d in range(self.dim + 1)
            ],
            "faces": [[[[j, s] for j, s in fl] for fl in self.faces[d]] for d in range(self.dim + 1)],
            "orientation": [int(x) for x in self.orientation],
            "regions": {
                r: {"dim": self.region_dim[r], "cells": {str(d): sorted(v) for d, v in cells.items()},
                    "sign": {str(k): v for k, v in sorted(self.region_sign[r].items())}}
                for r, cells in sorted(self.regions.items())
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ----------------------------------------------------------------------
# construction helpers


class _Builder:
    def __init__(self, kind: str, dim: int, periods: tuple | None):
        self.cx = CellComplex(kind=kind, dim=dim, periods=periods)
        self.cx.cells = [[] for _ in range(dim + 1)]
        self.cx.index = [dict() for _ in range(dim + 1)]
        self.cx.faces = [[] for _ in range(dim + 1)]

    def _vertex(self, p: Point) -> int:
        return self.add_simplex([p])

    def add_simplex(self, pts: Sequence[Point]) -> int:
        cx = self.cx
        pts = [tuple(p) for p in pts]
        d = len(pts) - 1
        key = cx.simplex_key(pts)
        if key in cx.index[d]:
            return cx.index[d][key]
        faces = []
        if d > 0:
            for j in range(d + 1):
                sub = pts[:j] + pts[j + 1:]
                faces.append((self.add_simplex(sub), (-1) ** j))
        verts = tuple(self._vertex(p) for p in pts) if d > 0 else None
        idx = len(cx.cells[d])
        if verts is None:
            verts = (idx,)
        cx.cells[d].append(Cell(idx, d, verts, tuple(pts), key))
        cx.index[d][key] = idx
        cx.faces[d].append(faces)
        return idx

    def add_cube(self, corner: Sequence[int], axes: Sequence[int]) -> int:
        cx = self.cx
        corner = tuple(corner)
        axes = tuple(axes)
        d = len(axes)
        key = cx.cube_key(corner, axes)
        if key in cx.index[d]:
            return cx.index[d][key]
        faces = []
        for j, a in enumerate(axes):
            rest = axes[:j] + axes[j + 1:]
            lo = self.add_cube(corner, rest)
            up = list(corner)
            up[a] += 1
            hi = self.add_cube(up, rest)
            s = (-1) ** j
            faces.append((hi, s))
            faces.append((lo, -s))
        pts = _binary_order(corner, axes)
        if d == 0:
            idx = len(cx.cells[0])
            verts = (idx,)
        else:
            verts = tuple(self.add_cube(p, ()) for p in pts)
            idx = len(cx.cells[d])
        cx.cells[d].append(Cell(idx, d, verts, tuple(pts), key, corner=cx.canon(corner), axes=axes))
        cx.index[d][key] = idx
        cx.faces[d].append(faces)
        return idx

    def finish(self) -> CellComplex:
        cx = self.cx
        top = cx.dim
        if cx.kind == SIMPLICIAL:
            sig = []
            for c in cx.cells[top]:
                p0 = np.array(c.points[0])
                mat = np.array([np.array(q) - p0 for q in c.points[1:]], dtype=float)
                det = np.linalg.det(mat) if top > 0 else 1.0
                if abs(det) < 0.5:
                    raise ValueError("degenerate top simplex")
                sig.append(1 if det > 0 else -1)
            cx.orientation = np.array(sig, dtype=np.int64)
        else:
            cx.orientation = np.ones(cx.n(top), dtype=np.int64)
        return cx


def _binary_order(corner: Sequence[int], axes: Sequence[int]) -> list:
    """Corner points of a cube; bit k of the position toggles axes[k]."""
    out = []
    for pos in range(1 << len(axes)):
        p = list(corner)
        for k, a in enumerate(axes):
            if (pos >> k) & 1:
                p[a] += 1
        out.append(tuple(p))
    return out


def _kuhn_simplices(corner: Sequence[int], axes: Sequence[int]) -> Iterable[list]:
    """Top simplices of the coordinate-order triangulation of a cube."""
    for perm in itertools.permutations(axes):
        p = list(corner)
        pts = [tuple(p)]
        for a in perm:
            p[a] += 1
            pts.append(tuple(p))
        yield pts


def _close_regions(cx: CellComplex, seeds: dict) -> None:
    """Record each region with the closure (all faces) of its seed cells."""
    for name, (d, idxs) in seeds.items():
        cells = {k: set() for k in range(d + 1)}
        stack = [(d, i) for i in idxs]
        while stack:
            k, i = stack.pop()
            if i in cells[k]:
                continue
            cells[k].add(i)
            if k > 0:
                for j, _ in cx.faces[k][i]:
                    stack.append((k - 1, j))
        cx.regions[name] = cells
        cx.region_dim[name] = d


# ----------------------------------------------------------------------
# public builders


def build_triangle_lattice(patch_size: int, kind: str = SIMPLICIAL) -> CellComplex:
    """Triangle-shaped 2D patch with three gapped boundaries.

    ``simplicial``: points ``0 <= x <= y <= k`` with the coordinate-order
    triangulation; ``L_r`` is the side ``x = 0``, ``L_b`` the side ``y = k``
    and ``L_rb`` the diagonal.  ``cubical``: the ``k x k`` square whose left
    side is ``L_r``, top side ``L_b`` and bottom plus right sides ``L_rb``.
    """
    k = int(patch_size)
    if k < 1:
        raise ValueError("patch_size must be >= 1")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    b = _Builder(kind, 2, None)
    if kind == SIMPLICIAL:
        for i in range(k):
            for j in range(k):
                for pts in _kuhn_simplices((i, j), (0, 1)):
                    if all(x <= y for x, y in pts):
                        b.add_simplex(pts)
    else:
        for i in range(k):
            for j in range(k):
                b.add_cube((i, j), (0, 1))
    cx = b.finish()
    bd = cx.boundary_chain()
    groups: dict = {"L_r": [], "L_b": [], "L_rb": []}
    for e in bd:
        (x0, y0), (x1, y1) = cx.cells[1][e].points[0], cx.cells[1][e].points[-1]
        if x0 == x1 == 0:
            groups["L_r"].append(e)
        elif y0 == y1 == k:
            groups["L_b"].append(e)
        else:
            groups["L_rb"].append(e)
    _close_regions(cx, {name: (1, es) for name, es in groups.items()})
    for name, es in groups.items():
        cx.region_sign[name] = {e: bd[e] for e in es}
    cx.name = f"triangle-{kind}-{k}"
    return cx


# Plane equations of the four faces of the region s >= p1 >= p2 >= p3 >= 0.
_TET_PLANES = {
    "A": lambda p, s: p[0] == s,
    "B": lambda p, s: p[0] == p[1],
    "C": lambda p, s: p[1] == p[2],
    "D": lambda p, s: p[2] == 0,
}
# Which plane carries which boundary label: bdry_i is the face opposite the
# simplex vertex 4 - i (vertices (0,0,0), (s,0,0), (s,s,0), (s,s,s)).  With
# this handedness the hinge_{1,4} term is the only one that fires on the
# logical-one configuration of the single simplex, with exponent +1.
TET_LABELS = {"bdry1": "D", "bdry2": "C", "bdry3": "B", "bdry4": "A"}


def build_tetrahedron(refinement: int, labels: dict | None = None) -> CellComplex:
    """Tetrahedron ``s >= p1 >= p2 >= p3 >= 0`` cut into ``s^3`` simplices.

    The four faces are the regions ``bdry1..bdry4`` and the six edges where
    two faces meet are ``hinge_i_j``.  Induced orientations come from the
    boundary chain of the fundamental class; a hinge is oriented as part of
    the boundary of its higher-numbered face.
    """
    s = int(refinement)
    if s < 1:
        raise ValueError("refinement must be >= 1")
    labels = dict(TET_LABELS if labels is None else labels)
    b = _Builder(SIMPLICIAL, 3, None)
    for c in itertools.product(range(s), repeat=3):
        for pts in _kuhn_simplices(c, (0, 1, 2)):
            if all(s >= p[0] >= p[1] >= p[2] >= 0 for p in pts):
                b.add_simplex(pts)
    cx = b.finish()
    bd = cx.boundary_chain()
    groups = {name: [] for name in labels}
    for f in bd:
        pts = cx.cells[2][f].points
        hit = [name for name, plane in labels.items() if all(_TET_PLANES[plane](p, s) for p in pts)]
        if len(hit) != 1:
            raise RuntimeError("boundary triangle not on exactly one face plane")
        groups[hit[0]].append(f)
    _close_regions(cx, {name: (2, fs) for name, fs in groups.items()})
    for name, fs in groups.items():
        cx.region_sign[name] = {f: bd[f] for f in fs}
    names = sorted(labels)
    hinge_seeds = {}
    for i, a in enumerate(names):
        for bname in names[i + 1:]:
            es = sorted(cx.regions[a][1] & cx.regions[bname][1])
            hname = f"hinge_{a[-1]}_{bname[-1]}"
            hinge_seeds[hname] = (1, es)
    _close_regions(cx, hinge_seeds)
    for i, a in enumerate(names):
        for bname in names[i + 1:]:
            hname = f"hinge_{a[-1]}_{bname[-1]}"
            chain = cx.boundary_chain(bname)
            cx.region_sign[hname] = {e: chain.get(e, 0) for e in hinge_seeds[hname][1]}
    cx.name = f"tetrahedron-{s}"
    return cx


def build_torus(dims: Sequence[int], kind: str = CUBICAL) -> CellComplex:
    """Periodic lattice ``Z_L1 x ... x Z_Ln`` (cubical, or its Kuhn triangulation)."""
    dims = tuple(int(x) for x in dims)
    if not dims or any(x < 1 for x in dims):
        raise ValueError("every torus dimension must be >= 1")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    n = len(dims)
    b = _Builder(kind, n, dims)
    for c in itertools.product(*(range(L) for L in dims)):
        if kind == CUBICAL:
            b.add_cube(c, tuple(range(n)))
        else:
            for pts in _kuhn_simplices(c, tuple(range(n))):
                b.add_simplex(pts)
    cx = b.finish()
    cx.name = f"torus-{kind}-{'x'.join(map(str, dims))}"
    return cx


def refine(cx: CellComplex) -> CellComplex:
    """Coordinate-order simplicial refinement of a cubical complex.

    Regions are carried over cell by cell (each cube of a region is replaced
    by its Kuhn simplices), and induced orientations are recomputed from the
    refined fundamental chain.
    """
    if cx.kind == SIMPLICIAL:
        return cx
    b = _Builder(SIMPLICIAL, cx.dim, cx.periods)
    for c in cx.cells[cx.dim]:
        for pts in _kuhn_simplices(c.points[0], c.axes):
            b.add_simplex(pts)
    out = b.finish()
    seeds = {}
    for name, cells in cx.regions.items():
        d = cx.region_dim[name]
        idxs = []
        for i in cells[d]:
            c = cx.cells[d][i]
            for pts in _kuhn_simplices(c.points[0], c.axes):
                idxs.append(out.index[d][out.simplex_key(pts)])
        seeds[name] = (d, idxs)
    _close_regions(out, seeds)
    bd = out.boundary_chain()
    for name, (d, idxs) in seeds.items():
        if d == out.dim - 1:
            out.region_sign[name] = {i: bd.get(i, 0) for i in idxs}
        else:
            # codimension >= 2 regions: orient by the refined cubes' own order
            out.region_sign[name] = {i: 1 for i in idxs}
    out.name = f"{cx.name}-refined"
    return out


def check_complex(cx: CellComplex) -> dict:
    """Structural invariants; returns a dict of boolean results."""
    res = {}
    ok = True
    for d in range(2, cx.dim + 1):
        prod = cx.boundary_matrix(d - 1) @ cx.boundary_matrix(d)
        ok &= not prod.any()
    res["boundary_squared_zero"] = bool(ok)
    branching = True
    if cx.kind == SIMPLICIAL and cx.dim >= 2:
        for c in cx.cells[2]:
            p = c.points
            branching &= p[0] < p[1] < p[2]
    res["branching_acyclic"] = bool(branching)
    hinge_ok = True
    for name in cx.regions:
        if name.startswith("hinge_"):
            _, i, j = name.split("_")
            for e in cx.regions[name][1]:
                hinge_ok &= cx.in_region(f"bdry{i}", 1, e) and cx.in_region(f"bdry{j}", 1, e)
    res["hinges_in_both_faces"] = bool(hinge_ok)
    res["orientation_defined"] = cx.orientation is not None and len(cx.orientation) == cx.n(cx.dim)
    res["closed"] = cx.closed
    return res
