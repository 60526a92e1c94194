"""Combinatorial multivector fields.

A multivector field is a partition of a complex into locally closed pieces
(multivectors).  It induces the multivalued map F(x) = cl{x} ∪ [x] whose
digraph carries all of the dynamics; a multivector is critical when the
relative homology of its closure mod its mouth is nonzero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .complexes import Cell, Complex
from .errors import InputError
from .homology import relative_homology


@dataclass
class MultivectorField:
    complex: Complex
    assignment: dict[Cell, str]
    multivectors: dict[str, frozenset]
    # criticality memo; write-once per key, safe to fill idempotently
    _critical: dict[str, bool] = field(default_factory=dict, repr=False)

    def mv_id_of(self, x: Cell) -> str:
        try:
            return self.assignment[x]
        except KeyError:
            raise InputError(f"cell {x!r} not in complex") from None

    def mv_of(self, x: Cell) -> frozenset:
        return self.multivectors[self.mv_id_of(x)]

    def fv(self, x: Cell) -> frozenset:
        return self.complex.closure([x]) | self.mv_of(x)

    def successors(self, x: Cell) -> Iterator[Cell]:
        """Targets of x in the induced digraph (x itself included)."""
        seen = self.mv_of(x)
        yield from seen
        for y in self.complex.closure([x]):
            if y not in seen:
                yield y

    def is_critical(self, mv_id: str) -> bool:
        if mv_id not in self.multivectors:
            raise InputError(f"unknown multivector {mv_id!r}")
        cached = self._critical.get(mv_id)
        if cached is None:
            v = self.multivectors[mv_id]
            cl = self.complex.closure(v)
            cached = relative_homology(self.complex, cl, cl - v).total_rank() > 0
            self._critical[mv_id] = cached
        return cached

    def is_compatible(self, cells: Iterable[Cell]) -> bool:
        """True iff the set is a union of multivectors."""
        cells = self.complex.check_cells(cells)
        return all(self.mv_of(x) <= cells for x in cells)

    def is_isolating_block(self, cells: Iterable[Cell]) -> bool:
        cells = self.complex.check_cells(cells)
        return self.complex.is_locally_closed(cells) and self.is_compatible(cells)

    def disconnected_multivectors(self) -> list[str]:
        """Multivectors whose cells do not form a face-connected set."""
        out = []
        for mv_id, cells in sorted(self.multivectors.items()):
            seen = {next(iter(sorted(cells)))}
            todo = list(seen)
            while todo:
                x = todo.pop()
                for y in (self.complex.facets[x] | self.complex.cofacets[x]) & cells:
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
            if len(seen) != len(cells):
                out.append(mv_id)
        return out


def _mv_label(c: Complex, cells: frozenset) -> str:
    return min(cells, key=lambda x: (c.dim_of[x], x))


def build_mvf(c: Complex, partition: Iterable[Iterable[Cell]]) -> MultivectorField:
    """Validate a partition into locally closed sets and build the field."""
    assignment: dict[Cell, str] = {}
    multivectors: dict[str, frozenset] = {}
    for part in partition:
        cells = c.check_cells(part)
        if not cells:
            raise InputError("empty multivector in partition")
        if not c.is_locally_closed(cells):
            raise InputError(f"multivector {sorted(cells)} is not locally closed")
        label = _mv_label(c, cells)
        if label in multivectors:
            raise InputError(f"duplicate multivector label {label!r}")
        multivectors[label] = cells
        for x in cells:
            if x in assignment:
                raise InputError(f"cell {x!r} appears in two multivectors")
            assignment[x] = label
    missing = c.dim_of.keys() - assignment.keys()
    if missing:
        raise InputError(f"partition misses cells: {sorted(missing)}")
    return MultivectorField(complex=c, assignment=assignment, multivectors=multivectors)


def singleton_mvf(c: Complex) -> MultivectorField:
    return build_mvf(c, [[x] for x in c.cells()])


def fv(v: MultivectorField, x: Cell) -> frozenset:
    return v.fv(x)


def is_critical(v: MultivectorField, mv_id: str) -> bool:
    return v.is_critical(mv_id)


def refines(v1: MultivectorField, v2: MultivectorField) -> bool:
    """Every multivector of v1 is contained in a multivector of v2."""
    return all(cells <= v2.mv_of(next(iter(cells))) for cells in v1.multivectors.values())


def refinement_relation(v1: MultivectorField, v2: MultivectorField) -> str:
    if v1.complex is not v2.complex and v1.complex != v2.complex:
        raise InputError("fields live on different complexes")
    fine = refines(v1, v2)
    coarse = refines(v2, v1)
    if fine and coarse:
        return "equal"
    if fine:
        return "refines"
    if coarse:
        return "coarsens"
    return "incomparable"


def flow_digraph(v: MultivectorField) -> dict[Cell, tuple[Cell, ...]]:
    """Materialized adjacency of the induced digraph (successors sorted)."""
    key = lambda x: (v.complex.dim_of[x], x)  # noqa: E731
    return {x: tuple(sorted(set(v.successors(x)), key=key)) for x in v.complex.cells()}
