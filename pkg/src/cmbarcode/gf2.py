"""Dense-enough GF(2) linear algebra on int bitmasks.

Vectors are Python ints (bit i = coordinate i), matrices are lists of column
vectors.  Reduction uses highest-set-bit pivoting, left to right, which keeps
every result deterministic for a fixed column order.
"""
from __future__ import annotations

from dataclasses import dataclass, field


def pivot(v: int) -> int:
    """Index of the highest set bit, -1 for the zero vector."""
    return v.bit_length() - 1


class Echelon:
    """Growable echelon basis with optional combination tracking.

    ``combos[i]`` records, as a bitmask over caller-defined tags, which input
    vectors were xored together to produce basis vector ``i``.
    """

    def __init__(self) -> None:
        self.vectors: list[int] = []
        self.combos: list[int] = []
        self._by_pivot: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.vectors)

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        """Reduce v against the basis; returns (residual, accumulated combo)."""
        while v:
            i = self._by_pivot.get(pivot(v))
            if i is None:
                break
            v ^= self.vectors[i]
            combo ^= self.combos[i]
        return v, combo

    def add(self, v: int, combo: int = 0) -> tuple[int, int]:
        """Reduce v and insert the residual if independent.

        Returns (residual, combo); residual 0 means v was in the span.
        """
        v, combo = self.reduce(v, combo)
        if v:
            self._by_pivot[pivot(v)] = len(self.vectors)
            self.vectors.append(v)
            self.combos.append(combo)
        return v, combo

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def span_equals(self, other: "Echelon") -> bool:
        return len(self) == len(other) and all(other.contains(v) for v in self.vectors) \
            and all(self.contains(v) for v in other.vectors)


def rank(columns: list[int]) -> int:
    e = Echelon()
    for c in columns:
        e.add(c)
    return len(e)


def kernel_combos(columns: list[int]) -> list[int]:
    """Kernel of the matrix with the given columns.

    Each kernel element is returned as a bitmask over column indices (bit j set
    means column j participates); the masks are in echelon form with the
    highest participating column as pivot.
    """
    e = Echelon()
    out = []
    for j, c in enumerate(columns):
        residual, combo = e.add(c, 1 << j)
        if residual == 0:
            out.append(combo | (1 << j))
    return out


@dataclass
class Matrix:
    """A GF(2) matrix as columns over a fixed number of rows."""

    rows: int
    columns: list[int] = field(default_factory=list)

    def rank(self) -> int:
        return rank(self.columns)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.columns)

    def entry(self, i: int, j: int) -> int:
        return (self.columns[j] >> i) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(len(self.columns))] for i in range(self.rows)]

    def __mul__(self, other: "Matrix") -> "Matrix":
        cols = []
        for c in other.columns:
            v = 0
            j = 0
            while c:
                if c & 1:
                    v ^= self.columns[j]
                c >>= 1
                j += 1
            cols.append(v)
        return Matrix(self.rows, cols)
