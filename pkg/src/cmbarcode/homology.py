"""Z2 simplicial homology of closed pairs.

Everything is computed on the quotient chain complex of a pair (P, E): the
basis in degree d is the set of d-cells of P minus E ordered by (dim, id), and
boundaries are taken mod E.  Representative relative cycles are kept as plain
frozensets of cells so they can be pushed between pairs by set operations.

The coning construction replaces a pair by an honest complex: every cell of E
is coned over a dummy apex, after which absolute homology in positive degrees
agrees with the relative homology of the pair.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .complexes import Cell, Complex, build_complex
from .errors import InputError


def _check_pair(c: Complex, p, e) -> tuple[frozenset, frozenset]:
    p = c.check_cells(p)
    e = c.check_cells(e)
    if not e <= p:
        raise InputError("relative part E is not contained in P")
    if not c.is_closed(p):
        raise InputError("P is not closed")
    if not c.is_closed(e):
        raise InputError("E is not closed")
    return p, e


@dataclass
class RelHomology:
    """Ranks and representative relative cycles of H(P, E), degree by degree."""

    ranks: list[int]
    representatives: list[list[frozenset]]

    def total_rank(self) -> int:
        return sum(self.ranks)

    def padded(self, n: int) -> list[int]:
        return (self.ranks + [0] * n)[:n]


class _PairComplex:
    """Index bookkeeping for the quotient chain complex of a pair."""

    def __init__(self, c: Complex, p: frozenset, e: frozenset):
        self.complex = c
        self.cells = p - e
        maxdim = max((c.dim_of[x] for x in self.cells), default=-1)
        self.basis: list[list[Cell]] = [
            sorted(x for x in self.cells if c.dim_of[x] == d) for d in range(maxdim + 1)
        ]
        self.index: list[dict[Cell, int]] = [
            {x: i for i, x in enumerate(b)} for b in self.basis
        ]

    def maxdeg(self) -> int:
        return len(self.basis) - 1

    def boundary_columns(self, d: int) -> list[int]:
        """Columns of the boundary map from degree d to degree d-1."""
        if d <= 0 or d > self.maxdeg():
            return [0] * len(self.basis[d]) if 0 <= d <= self.maxdeg() else []
        rows = self.index[d - 1]
        cols = []
        for x in self.basis[d]:
            v = 0
            for f in self.complex.facets[x]:
                i = rows.get(f)
                if i is not None:
                    v ^= 1 << i
            cols.append(v)
        return cols

    def to_mask(self, chain: frozenset, d: int) -> int:
        v = 0
        for x in chain:
            v ^= 1 << self.index[d][x]
        return v

    def to_cells(self, mask: int, d: int) -> frozenset:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.basis[d][i])
            mask >>= 1
            i += 1
        return frozenset(out)

    def cycle_masks(self, d: int) -> list[int]:
        """Basis of the relative cycle space in degree d, as d-cell masks."""
        if d < 0 or d > self.maxdeg():
            return []
        if d == 0:
            return gf2.kernel_combos([0] * len(self.basis[0]))
        return gf2.kernel_combos(self.boundary_columns(d))

    def boundary_space(self, d: int) -> gf2.Echelon:
        ech = gf2.Echelon()
        if d + 1 <= self.maxdeg():
            for col in self.boundary_columns(d + 1):
                ech.add(col)
        return ech


def relative_homology(c: Complex, p, e) -> RelHomology:
    """Ranks and representatives of H(P, E) over Z2."""
    p, e = _check_pair(c, p, e)
    pc = _PairComplex(c, p, e)
    ranks: list[int] = []
    reps: list[list[frozenset]] = []
    for d in range(pc.maxdeg() + 1):
        ech = pc.boundary_space(d)
        nb = len(ech)
        chosen = []
        for z in pc.cycle_masks(d):
            residual, _ = ech.add(z)
            if residual:
                chosen.append(pc.to_cells(z, d))
        ranks.append(len(ech) - nb)
        reps.append(chosen)
    while ranks and ranks[-1] == 0:
        ranks.pop()
        reps.pop()
    return RelHomology(ranks=ranks, representatives=reps)


def _express(pc: _PairComplex, hom: RelHomology, chain: frozenset, d: int) -> int:
    """Coefficients of a relative cycle over the homology basis of the pair."""
    ech = pc.boundary_space(d)
    for i, rep in enumerate(hom.representatives[d] if d < len(hom.representatives) else []):
        ech.add(pc.to_mask(rep, d), 1 << i)
    residual, combo = ech.reduce(pc.to_mask(chain, d))
    if residual:
        raise InputError("chain is not a relative cycle of the target pair")
    return combo


def pair_map(c: Complex, inner: tuple, outer: tuple) -> list[gf2.Matrix]:
    """Inclusion-induced matrices H(inner) -> H(outer), one per degree."""
    pi, ei = _check_pair(c, *inner)
    po, eo = _check_pair(c, *outer)
    if not (pi <= po and ei <= eo):
        raise InputError("inner pair is not included in outer pair")
    hi = relative_homology(c, pi, ei)
    ho = relative_homology(c, po, eo)
    pco = _PairComplex(c, po, eo)
    ndeg = max(len(hi.ranks), len(ho.ranks))
    out = []
    for d in range(ndeg):
        rows = hi.representatives[d] if d < len(hi.representatives) else []
        cols = []
        for rep in rows:
            mapped = frozenset(x for x in rep if x not in eo)
            cols.append(_express(pco, ho, mapped, d) if d < len(ho.ranks) else 0)
        out.append(gf2.Matrix(ho.ranks[d] if d < len(ho.ranks) else 0, cols))
    return out


def _boundary_cells(c: Complex, chain: frozenset) -> frozenset:
    out: set = set()
    for x in chain:
        out ^= c.facets[x]
    return frozenset(out)


def les_connecting(c: Complex, n0, n1, n2, d: int) -> gf2.Matrix:
    """Connecting map H_d(N2, N1) -> H_{d-1}(N1, N0) of the triple's long exact sequence."""
    n0 = c.check_cells(n0)
    n1 = c.check_cells(n1)
    n2 = c.check_cells(n2)
    if not (n0 <= n1 <= n2):
        raise InputError("triple is not nested")
    for name, s in (("N0", n0), ("N1", n1), ("N2", n2)):
        if not c.is_closed(s):
            raise InputError(f"{name} is not closed")
    top = relative_homology(c, n2, n1)
    bottom = relative_homology(c, n1, n0)
    pcb = _PairComplex(c, n1, n0)
    reps = top.representatives[d] if d < len(top.representatives) else []
    cols = []
    for rep in reps:
        # a relative cycle mod N1 is an honest chain in N2; its boundary lives in N1
        bd = frozenset(x for x in _boundary_cells(c, rep) if x not in n0)
        if not bd <= n1:
            raise InputError("representative is not a relative cycle mod N1")
        cols.append(_express(pcb, bottom, bd, d - 1) if 0 <= d - 1 < len(bottom.ranks) else 0)
    rows = bottom.ranks[d - 1] if 0 <= d - 1 < len(bottom.ranks) else 0
    return gf2.Matrix(rows, cols)


def cone_apex_name(c: Complex) -> str:
    apex = "ω#"
    k = 0
    while apex in c.dim_of:
        k += 1
        apex = f"ω#{k}"
    return apex


def coned_cell_name(apex: str, cell: Cell) -> str:
    return f"{apex}·{cell}"


def cone_pair(c: Complex, p, e) -> tuple[Complex, str]:
    """Simplicial complex on P with every cell of E coned over a dummy apex.

    Absolute homology of the result equals H(P, E) in positive degrees and
    gains one extra degree-0 class (the apex component when E is empty, the
    merged component otherwise).
    """
    p, e = _check_pair(c, p, e)
    apex = cone_apex_name(c)
    descriptions: list[tuple[str, int, tuple]] = [(apex, 0, ())]
    for x in sorted(p, key=lambda x: (c.dim_of[x], x)):
        descriptions.append((x, c.dim_of[x], tuple(sorted(c.facets[x]))))
    for x in sorted(e, key=lambda x: (c.dim_of[x], x)):
        d = c.dim_of[x]
        if d == 0:
            fs: tuple = (x, apex)
        else:
            fs = (x,) + tuple(coned_cell_name(apex, f) for f in sorted(c.facets[x]))
        descriptions.append((coned_cell_name(apex, x), d + 1, fs))
    return build_complex(descriptions), apex
