"""Exact linear algebra over GF(2).

Rows are Python ints used as bit sets: bit ``j`` of a row is the entry in
column ``j``.  Nothing here touches floating point.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class BitMatrix:
    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[int], ncols: int):
        self.rows = [int(r) for r in rows]
        self.ncols = int(ncols)
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows = []
        for row in a:
            cols = np.flatnonzero(row)
            rows.append(sum(1 << int(c) for c in cols))
        return cls(rows, a.shape[1])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in bits(r):
                out[i, j] = 1
        return out

    def restrict(self, column_mask: int) -> "BitMatrix":
        """Zero every column outside ``column_mask`` (same rank as deleting them)."""
        return BitMatrix([r & column_mask for r in self.rows], self.ncols)

    def rank(self) -> int:
        return rank_gf2(self.rows)

    def __eq__(self, other):
        return isinstance(other, BitMatrix) and self.ncols == other.ncols and self.rows == other.rows

    def __repr__(self):
        return f"BitMatrix({self.nrows}x{self.ncols})"


def bits(x: int) -> list[int]:
    """Indices of the set bits of ``x``, ascending."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def weight(x: int) -> int:
    return bin(x).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def xor_basis(rows: Iterable[int]) -> dict[int, int]:
    """Echelon basis keyed by leading (highest) bit."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            hb = r.bit_length() - 1
            b = basis.get(hb)
            if b is None:
                basis[hb] = r
                break
            r ^= b
    return basis


def rank_gf2(m) -> int:
    rows = m.rows if isinstance(m, BitMatrix) else m
    return len(xor_basis(rows))


def in_span(basis: dict[int, int], x: int) -> bool:
    while x:
        b = basis.get(x.bit_length() - 1)
        if b is None:
            return False
        x ^= b
    return True


def rref(rows: Sequence[int], column_order: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form with pivots sought in ``column_order``.

    Returns the nonzero reduced rows and their pivot columns, in pivot
    order.  Columns missing from ``column_order`` never become pivots.
    """
    work = [r for r in rows if r]
    out: list[int] = []
    pivots: list[int] = []
    for col in column_order:
        bit = 1 << col
        k = next((i for i, r in enumerate(work) if r & bit), None)
        if k is None:
            continue
        piv = work.pop(k)
        work = [r ^ piv if r & bit else r for r in work]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
        work = [r for r in work if r]
    return out, pivots


def reduce(x: int, reduced_rows: Sequence[int], pivots: Sequence[int]) -> int:
    """Remainder of ``x`` after clearing every pivot column."""
    for r, c in zip(reduced_rows, pivots):
        if x >> c & 1:
            x ^= r
    return x


def span(basis: Sequence[int]) -> list[int]:
    """All 2**k combinations of ``basis``, in Gray-code order starting at 0."""
    out = [0]
    cur = 0
    for i in range(1, 1 << len(basis)):
        cur ^= basis[(i & -i).bit_length() - 1]
        out.append(cur)
    return out
