"""Finite simplicial complexes viewed as finite T0 spaces.

Cells are opaque string labels; the face poset is x <= y iff x lies in the
closure of y.  Closed sets are down sets, open sets are upper sets, and a set
is locally closed when its mouth (closure minus the set) is closed.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputError

Cell = str
CellSet = frozenset


def sort_key(c: "Complex"):  # noqa: ANN201 - key function
    return lambda cell: (c.dim_of[cell], cell)


@dataclass(frozen=True)
class Complex:
    dim_of: Mapping[Cell, int]
    facets: Mapping[Cell, frozenset]
    cofacets: Mapping[Cell, frozenset]

    @property
    def dim(self) -> int:
        return max(self.dim_of.values(), default=-1)

    def cells(self) -> tuple[Cell, ...]:
        return tuple(sorted(self.dim_of, key=lambda x: (self.dim_of[x], x)))

    def cells_of_dim(self, d: int) -> tuple[Cell, ...]:
        return tuple(sorted((x for x, k in self.dim_of.items() if k == d)))

    def check_cells(self, cells: Iterable[Cell]) -> frozenset:
        cells = frozenset(cells)
        unknown = cells - self.dim_of.keys()
        if unknown:
            raise InputError(f"cells not in complex: {sorted(unknown)}")
        return cells

    def _sweep(self, seed: Iterable[Cell], adj: Mapping[Cell, frozenset]) -> frozenset:
        seen = set(seed)
        todo = deque(seen)
        while todo:
            for y in adj[todo.popleft()]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    def closure(self, cells: Iterable[Cell]) -> frozenset:
        return self._sweep(self.check_cells(cells), self.facets)

    def opening(self, cells: Iterable[Cell]) -> frozenset:
        """Minimal open superset: all iterated cofaces."""
        return self._sweep(self.check_cells(cells), self.cofacets)

    def mouth(self, cells: Iterable[Cell]) -> frozenset:
        cells = self.check_cells(cells)
        return self.closure(cells) - cells

    def is_closed(self, cells: Iterable[Cell]) -> bool:
        cells = self.check_cells(cells)
        return all(self.facets[x] <= cells for x in cells)

    def is_open(self, cells: Iterable[Cell]) -> bool:
        cells = self.check_cells(cells)
        return all(self.cofacets[x] <= cells for x in cells)

    def is_locally_closed(self, cells: Iterable[Cell]) -> bool:
        return self.is_closed(self.mouth(cells))

    def leq(self, x: Cell, y: Cell) -> bool:
        """Face-poset order: x <= y iff x in cl{y}."""
        return x in self.closure([y])


def build_complex(cell_descriptions: Iterable[tuple[str, int, Iterable[str]]]) -> Complex:
    """Validate and build a complex from (id, dim, facet ids) triples."""
    dim_of: dict[str, int] = {}
    raw_facets: dict[str, tuple[str, ...]] = {}
    for cid, dim, facets in cell_descriptions:
        if cid in dim_of:
            raise InputError(f"duplicate cell id {cid!r}")
        if dim < 0:
            raise InputError(f"cell {cid!r} has negative dimension")
        dim_of[cid] = dim
        raw_facets[cid] = tuple(facets)

    facets: dict[str, frozenset] = {}
    cofacets: dict[str, set] = {cid: set() for cid in dim_of}
    for cid, dim in dim_of.items():
        fs = raw_facets[cid]
        if dim == 0:
            if fs:
                raise InputError(f"vertex {cid!r} lists facets {fs}")
            facets[cid] = frozenset()
            continue
        if len(set(fs)) != dim + 1:
            raise InputError(
                f"cell {cid!r} of dim {dim} must have {dim + 1} distinct facets, got {fs}"
            )
        for f in fs:
            if f not in dim_of:
                raise InputError(f"cell {cid!r} lists unknown facet {f!r}")
            if dim_of[f] != dim - 1:
                raise InputError(
                    f"cell {cid!r} (dim {dim}) lists facet {f!r} of dim {dim_of[f]}"
                )
            cofacets[f].add(cid)
        facets[cid] = frozenset(fs)

    # boundary-of-boundary must vanish over Z2, i.e. every codim-2 face is
    # shared by exactly two facets
    for cid, dim in dim_of.items():
        if dim >= 2:
            odd: set = set()
            for f in facets[cid]:
                odd ^= facets[f]
            if odd:
                raise InputError(f"cell {cid!r} has odd face incidences at {sorted(odd)}")

    return Complex(
        dim_of=dict(dim_of),
        facets=facets,
        cofacets={cid: frozenset(s) for cid, s in cofacets.items()},
    )


def topology_query(c: Complex, a: Iterable[Cell], kind: str) -> frozenset:
    if kind == "closure":
        return c.closure(a)
    if kind == "opening":
        return c.opening(a)
    if kind == "mouth":
        return c.mouth(a)
    raise InputError(f"unknown topology query {kind!r}")


def set_predicate(c: Complex, a: Iterable[Cell], kind: str) -> bool:
    if kind == "closed":
        return c.is_closed(a)
    if kind == "open":
        return c.is_open(a)
    if kind == "locally_closed":
        return c.is_locally_closed(a)
    raise InputError(f"unknown set predicate {kind!r}")
