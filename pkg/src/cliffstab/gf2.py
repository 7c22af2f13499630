"""Linear algebra over GF(2) with rows stored as Python int bitsets.

Bit ``j`` of a row integer is the coefficient of column ``j``.  Every routine
works on plain lists of ints, so widths are unbounded.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    return popcount(x) & 1


def bits(x: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m ^= 1 << int(i)
    return m


def rref(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Returns ``(basis, pivots)`` where ``basis[i]`` has pivot column
    ``pivots[i]`` (its lowest set bit) and no other basis row has that bit.
    """
    basis: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if (r >> p) & 1:
                r ^= b
        if r == 0:
            continue
        p = (r & -r).bit_length() - 1
        for i, b in enumerate(basis):
            if (b >> p) & 1:
                basis[i] = b ^ r
        basis.append(r)
        pivots.append(p)
    return basis, pivots


def rank(rows: Sequence[int]) -> int:
    return len(rref(rows)[0])


def reduce(x: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    """Reduce ``x`` modulo the row space given in reduced form."""
    for b, p in zip(basis, pivots):
        if (x >> p) & 1:
            x ^= b
    return x


def in_span(x: int, rows: Sequence[int]) -> bool:
    basis, pivots = rref(rows)
    return reduce(x, basis, pivots) == 0


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of ``{x : parity(row & x) == 0 for every row}``."""
    basis, pivots = rref(rows)
    pivset = set(pivots)
    out: list[int] = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = 1 << free
        for b, p in zip(basis, pivots):
            if (b >> free) & 1:
                x |= 1 << p
        out.append(x)
    return out


def solve(rows: Sequence[int], rhs: Sequence[int]) -> int | None:
    """One solution ``x`` of ``parity(rows[i] & x) == rhs[i]`` or ``None``.

    Implemented by augmenting each row with its right-hand side bit placed
    above every column that appears in the system.
    """
    width = max((r.bit_length() for r in rows), default=0)
    aug = [r | ((rhs[i] & 1) << width) for i, r in enumerate(rows)]
    basis, pivots = rref(aug)
    x = 0
    for b, p in zip(basis, pivots):
        if p == width:
            return None
        if (b >> width) & 1:
            x |= 1 << p
    return x


def span(generators: Sequence[int]) -> Iterator[int]:
    """Enumerate the span of ``generators`` (assumed independent) by Gray code."""
    n = len(generators)
    cur = 0
    yield cur
    for i in range(1, 1 << n):
        flip = (i & -i).bit_length() - 1
        cur ^= generators[flip]
        yield cur


def transpose(rows: Sequence[int], ncols: int) -> list[int]:
    cols = [0] * ncols
    for i, r in enumerate(rows):
        for j in bits(r):
            cols[j] |= 1 << i
    return cols


def min_weight_coset(x: int, generators: Sequence[int], limit: int = 20) -> int:
    """Minimum-weight element of ``x + span(generators)``.

    Exhaustive over the span, so ``generators`` is first reduced to a basis
    and must have dimension at most ``limit``.
    """
    basis, _ = rref(generators)
    if len(basis) > limit:
        raise ValueError(f"coset search over 2^{len(basis)} elements exceeds limit")
    best = x
    best_w = popcount(x)
    for s in span(basis):
        w = popcount(x ^ s)
        if w < best_w:
            best, best_w = x ^ s, w
    return best
