"""Bit-packed linear algebra over GF(2).

Vectors are Python ints: bit ``i`` is coordinate ``i``.  Addition is XOR.
"""

from __future__ import annotations

from typing import Iterable


class XorBasis:
    """Row-echelon basis keyed by leading bit."""

    __slots__ = ("_rows",)

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        rows = self._rows
        while v:
            lead = v.bit_length() - 1
            row = rows.get(lead)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; returns False if it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        self._rows[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def vectors(self) -> list[int]:
        return [self._rows[k] for k in sorted(self._rows)]


def rank(vectors: Iterable[int]) -> int:
    return XorBasis(vectors).dim


def kernel_basis(columns: list[int]) -> list[int]:
    """Basis of ``{x : sum of columns[j] over bits j of x == 0}``.

    Each returned vector's highest bit is a distinct column index, so the
    basis is independent by construction.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for j, col in enumerate(columns):
        v, tag = col, 1 << j
        while v:
            lead = v.bit_length() - 1
            hit = pivots.get(lead)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        if v:
            pivots[v.bit_length() - 1] = (v, tag)
        else:
            kernel.append(tag)
    return kernel


def popcount(v: int) -> int:
    return bin(v).count("1")


def bits_of(v: int) -> list[int]:
    out, i = [], 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out
