"""Invariance and isolation for multivector fields.

Finest block partitions are the strongly connected components of the induced
digraph; invariant parts classify components (a component is invariant when it
spans at least two multivectors or is a single critical one) and glue them
with connection sets.  Index pairs, Conley indices, continuation checks and
connecting sequences all live here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complexes import Cell, Complex
from .errors import InputError
from .homology import RelHomology, relative_homology
from .mvf import MultivectorField, refinement_relation


def _cell_key(c: Complex):
    return lambda x: (c.dim_of[x], x)


def _label(c: Complex, cells: frozenset) -> str:
    return min(cells, key=_cell_key(c))


# ---------------------------------------------------------------------------
# graph primitives on the induced digraph, restricted to a region


def _adjacency(v: MultivectorField, region: frozenset) -> dict[Cell, tuple[Cell, ...]]:
    key = _cell_key(v.complex)
    return {
        x: tuple(sorted((set(v.successors(x)) & region) - {x}, key=key))
        for x in sorted(region, key=key)
    }


def _reach(adj: dict[Cell, tuple[Cell, ...]], seed: Iterable[Cell]) -> frozenset:
    seen = set(seed)
    todo = list(seen)
    while todo:
        for y in adj[todo.pop()]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def _reverse(adj: dict[Cell, tuple[Cell, ...]]) -> dict[Cell, list[Cell]]:
    rev: dict[Cell, list[Cell]] = {x: [] for x in adj}
    for x, ys in adj.items():
        for y in ys:
            rev[y].append(x)
    return rev


def scc_partition(v: MultivectorField, region: Iterable[Cell]) -> list[frozenset]:
    """Strongly connected components of the induced digraph on the region."""
    region = v.complex.check_cells(region)
    adj = _adjacency(v, region)
    order = list(adj)
    index: dict[Cell, int] = {}
    low: dict[Cell, int] = {}
    on_stack: set = set()
    stack: list[Cell] = []
    count = 0
    out: list[frozenset] = []

    for root in order:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = count
        count += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            x, it = work[-1]
            advanced = False
            for y in it:
                if y not in index:
                    index[y] = low[y] = count
                    count += 1
                    stack.append(y)
                    on_stack.add(y)
                    work.append((y, iter(adj[y])))
                    advanced = True
                    break
                if y in on_stack:
                    low[x] = min(low[x], index[y])
            if advanced:
                continue
            work.pop()
            if work:
                px = work[-1][0]
                low[px] = min(low[px], low[x])
            if low[x] == index[x]:
                comp = []
                while True:
                    y = stack.pop()
                    on_stack.discard(y)
                    comp.append(y)
                    if y == x:
                        break
                out.append(frozenset(comp))
    out.sort(key=lambda s: _cell_key(v.complex)(_label(v.complex, s)))
    return out


def _scc_is_invariant(v: MultivectorField, comp: frozenset) -> bool:
    mv_ids = {v.mv_id_of(x) for x in comp}
    if len(mv_ids) >= 2:
        return True
    return v.is_critical(next(iter(mv_ids)))


# ---------------------------------------------------------------------------
# reachability-flavoured operations


def push_forward(v: MultivectorField, a: Iterable[Cell], region: Iterable[Cell]) -> frozenset:
    """Forward-reachable set of a inside the region (a included)."""
    region = v.complex.check_cells(region)
    a = v.complex.check_cells(a)
    if not a <= region:
        raise InputError("push-forward seed leaves the region")
    return _reach(_adjacency(v, region), a)


def connection_set(
    v: MultivectorField, family: Sequence[Iterable[Cell]], region: Iterable[Cell]
) -> frozenset:
    """Cells lying on a path that starts and ends in members of the family."""
    region = v.complex.check_cells(region)
    union: frozenset = frozenset()
    for a in family:
        a = v.complex.check_cells(a)
        if not a <= region:
            raise InputError("family member leaves the region")
        union |= a
    adj = _adjacency(v, region)
    fwd = _reach(adj, union)
    rev = {x: tuple(ys) for x, ys in _reverse(adj).items()}
    bwd = _reach(rev, union)
    return fwd & bwd


def essential_exists(v: MultivectorField, x: Cell, region: Iterable[Cell]) -> bool:
    """Brute-force test that x lies on an essential solution within the region.

    A cell qualifies when, both forward and backward, it can reach a critical
    multivector or a cycle visiting at least two multivectors.  Pure path
    search; deliberately avoids the component shortcut so it can serve as an
    independent oracle for invariant_part.
    """
    region = v.complex.check_cells(region)
    if x not in region:
        raise InputError(f"cell {x!r} outside the region")
    if not v.is_compatible(region) or not v.complex.is_locally_closed(region):
        raise InputError("region is not an isolating block")
    adj = _adjacency(v, region)
    rev = {c: tuple(ys) for c, ys in _reverse(adj).items()}
    reach_fwd = {c: _reach(adj, [c]) for c in adj}

    anchors = set()
    for y in adj:
        if v.is_critical(v.mv_id_of(y)):
            anchors.add(y)
            continue
        for z in adj[y]:
            if v.mv_id_of(z) != v.mv_id_of(y) and y in reach_fwd[z]:
                anchors.add(y)  # y sits on a cycle through two multivectors
                break
    return bool(reach_fwd[x] & anchors) and bool(_reach(rev, [x]) & anchors)


@dataclass(frozen=True)
class EssentialWitness:
    cycle_support: frozenset
    left_limit: frozenset
    right_limit: frozenset


def essential_witness(
    v: MultivectorField, x: Cell, region: Iterable[Cell]
) -> EssentialWitness | None:
    """A witnessing structure for essential_exists, or None."""
    region = v.complex.check_cells(region)
    if not essential_exists(v, x, region):
        return None
    adj = _adjacency(v, region)
    rev = {c: tuple(ys) for c, ys in _reverse(adj).items()}
    key = _cell_key(v.complex)

    def limit(direction: dict[Cell, tuple[Cell, ...]]) -> frozenset:
        # first anchor reachable in the given direction: a critical cell or a
        # cycle through two multivectors (cycles read the same both ways)
        for y in sorted(_reach(direction, [x]), key=key):
            if v.is_critical(v.mv_id_of(y)):
                return frozenset([y])
            cyc = _reach(adj, [y]) & _reach(rev, [y])
            if len({v.mv_id_of(z) for z in cyc}) >= 2:
                return cyc
        return frozenset()

    right = limit(adj)
    left = limit(rev)
    return EssentialWitness(cycle_support=left | right, left_limit=left, right_limit=right)


def invariant_part(v: MultivectorField, block: Iterable[Cell]) -> frozenset:
    """Invariant part of an isolating block via component classification."""
    block = v.complex.check_cells(block)
    if not v.is_isolating_block(block):
        raise InputError("set is not an isolating block (locally closed + compatible)")
    cores = [s for s in scc_partition(v, block) if _scc_is_invariant(v, s)]
    if not cores:
        return frozenset()
    return connection_set(v, cores, block)


# ---------------------------------------------------------------------------
# block and Morse decompositions


@dataclass
class BlockDecomposition:
    field: MultivectorField
    ambient: frozenset
    blocks: dict[str, frozenset]
    below: dict[str, frozenset]  # strict descendants in the flow order
    partition: bool

    def labels(self) -> list[str]:
        key = _cell_key(self.field.complex)
        return sorted(self.blocks, key=key)

    def order_edges(self) -> list[tuple[str, str]]:
        """Transitive reduction of the flow order, as (upper, lower) pairs."""
        out = []
        for p in self.labels():
            for q in sorted(self.below[p]):
                if not any(q in self.below[r] for r in self.below[p]):
                    out.append((p, q))
        return out

    def label_of_cell(self, x: Cell) -> str | None:
        for lbl, cells in self.blocks.items():
            if x in cells:
                return lbl
        return None


@dataclass
class MorseDecomposition:
    field: MultivectorField
    sets: dict[str, frozenset]
    below: dict[str, frozenset]
    covering: dict[str, str]  # morse label -> block label

    def labels(self) -> list[str]:
        key = _cell_key(self.field.complex)
        return sorted(self.sets, key=key)


def _block_order(
    v: MultivectorField, blocks: dict[str, frozenset], region: frozenset
) -> dict[str, frozenset]:
    adj = _adjacency(v, region)
    below: dict[str, set] = {p: set() for p in blocks}
    reach_cache: dict[str, frozenset] = {p: _reach(adj, cells) for p, cells in blocks.items()}
    for p, r in reach_cache.items():
        for q, cells in blocks.items():
            if q != p and r & cells:
                below[p].add(q)
    return {p: frozenset(s) for p, s in below.items()}


def finest_block_partition(
    v: MultivectorField, region: Iterable[Cell] | None = None
) -> BlockDecomposition:
    """Components of the induced digraph, with the flow-induced order."""
    region = v.complex.check_cells(region if region is not None else v.complex.cells())
    if not v.is_isolating_block(region):
        raise InputError("region is not an isolating block")
    comps = scc_partition(v, region)
    blocks = {_label(v.complex, s): s for s in comps}
    below = _block_order(v, blocks, region)
    for p, qs in below.items():
        if any(p in below[q] for q in qs):
            raise InputError("component order contains a cycle; region is inconsistent")
    return BlockDecomposition(
        field=v, ambient=region, blocks=blocks, below=below, partition=True
    )


def validate_block_decomposition(
    v: MultivectorField,
    blocks: Sequence[Iterable[Cell]],
    ambient: Iterable[Cell] | None = None,
) -> BlockDecomposition:
    """Check a family of blocks and return it with its minimal flow order."""
    region = v.complex.check_cells(ambient if ambient is not None else v.complex.cells())
    named: dict[str, frozenset] = {}
    seen: set = set()
    for raw in blocks:
        cells = v.complex.check_cells(raw)
        if not cells:
            raise InputError("empty block in decomposition")
        if not cells <= region:
            raise InputError(f"block {sorted(cells)} leaves the ambient region")
        if cells & seen:
            raise InputError(f"blocks overlap at {sorted(cells & seen)}")
        seen |= cells
        if not v.is_isolating_block(cells):
            raise InputError(f"block {sorted(cells)} is not an isolating block")
        named[_label(v.complex, cells)] = cells

    # every invariant component must be swallowed by some block
    for comp in scc_partition(v, region):
        if _scc_is_invariant(v, comp) and not any(comp <= b for b in named.values()):
            raise InputError(
                f"invariant component {sorted(comp)} is not contained in any block"
            )

    adj = _adjacency(v, region)
    rev = {c: tuple(ys) for c, ys in _reverse(adj).items()}
    below = _block_order(v, named, region)
    for p, cells in named.items():
        if any(p in below[q] for q in below[p]):
            q = next(q for q in below[p] if p in below[q])
            raise InputError(f"blocks {p!r} and {q!r} lie on a common cycle")
        outside = (_reach(adj, cells) & _reach(rev, cells)) - cells
        if outside:
            raise InputError(
                f"path leaves block {p!r} and returns through {sorted(outside)[:4]}"
            )
    return BlockDecomposition(
        field=v,
        ambient=region,
        blocks=named,
        below=below,
        partition=seen == region,
    )


def induced_morse(d: BlockDecomposition) -> MorseDecomposition:
    """Nonempty invariant parts of the blocks, with the restricted order."""
    sets: dict[str, frozenset] = {}
    covering: dict[str, str] = {}
    block_to_morse: dict[str, str] = {}
    for p, cells in d.blocks.items():
        inv = invariant_part(d.field, cells)
        if inv:
            m = _label(d.field.complex, inv)
            sets[m] = inv
            covering[m] = p
            block_to_morse[p] = m
    below = {
        m: frozenset(
            block_to_morse[q] for q in d.below[covering[m]] if q in block_to_morse
        )
        for m in sets
    }
    return MorseDecomposition(field=d.field, sets=sets, below=below, covering=covering)


# ---------------------------------------------------------------------------
# attractors, repellers, index pairs


def classify_ar(
    v: MultivectorField, s: Iterable[Cell], candidate: Iterable[Cell]
) -> str:
    s = v.complex.check_cells(s)
    candidate = v.complex.check_cells(candidate)
    if invariant_part(v, s) != s:
        raise InputError("reference set is not an isolated invariant set")
    if not candidate <= s or invariant_part(v, candidate) != candidate:
        raise InputError("candidate is not an isolated invariant subset")
    image = frozenset().union(*(v.fv(x) for x in candidate)) if candidate else frozenset()
    if image & s == candidate:
        return "attractor"
    preimage = frozenset(x for x in s if v.fv(x) & candidate)
    if preimage == candidate:
        return "repeller"
    return "neither"


@dataclass(frozen=True)
class IndexPair:
    p: frozenset
    e: frozenset

    def includes(self, other: "IndexPair") -> bool:
        return other.p <= self.p and other.e <= self.e


@dataclass(frozen=True)
class ConleyIndex:
    ranks: tuple[int, ...]  # trailing zeros trimmed

    def padded(self, n: int) -> list[int]:
        return (list(self.ranks) + [0] * n)[:n]

    def total(self) -> int:
        return sum(self.ranks)


def validate_index_pair(v: MultivectorField, p: Iterable[Cell], e: Iterable[Cell]) -> frozenset:
    """Check the exit-set and positive-invariance conditions; return inv(P - E)."""
    c = v.complex
    p = c.check_cells(p)
    e = c.check_cells(e)
    if not e <= p:
        raise InputError("exit set is not contained in P")
    if not c.is_closed(p):
        raise InputError("P is not closed")
    if not c.is_closed(e):
        raise InputError("exit set is not closed")
    for x in sorted(p - e):
        bad = v.fv(x) - p
        if bad:
            raise InputError(f"exit-set condition fails at {x!r} -> {sorted(bad)[0]!r}")
    for x in sorted(e):
        bad = (v.fv(x) & p) - e
        if bad:
            raise InputError(f"positive invariance fails at {x!r} -> {sorted(bad)[0]!r}")
    diff = p - e
    assert v.is_compatible(diff), "P - E must be compatible for a valid pair"
    return invariant_part(v, diff)


def index_pair_of_block(v: MultivectorField, b: Iterable[Cell]) -> IndexPair:
    b = v.complex.check_cells(b)
    if not v.is_isolating_block(b):
        raise InputError("set is not an isolating block")
    pair = IndexPair(p=v.complex.closure(b), e=v.complex.mouth(b))
    validate_index_pair(v, pair.p, pair.e)
    return pair


def conley_index(v: MultivectorField, pair: IndexPair) -> ConleyIndex:
    validate_index_pair(v, pair.p, pair.e)
    return ConleyIndex(ranks=tuple(relative_homology(v.complex, pair.p, pair.e).ranks))


def pair_homology(v: MultivectorField, pair: IndexPair) -> RelHomology:
    return relative_homology(v.complex, pair.p, pair.e)


def continues_to(
    v0: MultivectorField, v1: MultivectorField, b: Iterable[Cell]
) -> tuple[frozenset, frozenset]:
    """Invariant parts of a common isolating block across a comparable step."""
    if refinement_relation(v0, v1) == "incomparable":
        raise InputError("fields are not comparable in the refinement order")
    b = v0.complex.check_cells(b)
    if not v0.is_isolating_block(b):
        raise InputError("set is not an isolating block for the first field")
    if not v1.is_isolating_block(b):
        raise InputError("set is not an isolating block for the second field")
    return invariant_part(v0, b), invariant_part(v1, b)


def connecting_sequence(
    v: MultivectorField,
    pair1: IndexPair,
    pair2: IndexPair,
    core: Iterable[Cell] | None = None,
) -> list[IndexPair]:
    """Zigzag of index pairs joining two pairs of the same invariant set.

    Built from push-forwards of a common core block sitting inside both
    differences; adjacent terms are related by inclusion and terms equal to
    their neighbour are dropped.
    """
    c = v.complex
    s1 = validate_index_pair(v, pair1.p, pair1.e)
    s2 = validate_index_pair(v, pair2.p, pair2.e)
    if s1 != s2:
        raise InputError("pairs isolate different invariant sets")
    core = c.check_cells(core if core is not None else s1)
    if not v.is_isolating_block(core):
        raise InputError("core is not an isolating block")
    if not (core <= pair1.p - pair1.e and core <= pair2.p - pair2.e):
        raise InputError("core does not sit inside both pair differences")
    if invariant_part(v, core) != s1:
        raise InputError("core does not isolate the same invariant set")

    cl_b, mo_b = c.closure(core), c.mouth(core)

    def half(pair: IndexPair) -> list[IndexPair]:
        pf_cl = push_forward(v, cl_b & pair.p, pair.p)
        pf_mo = push_forward(v, mo_b & pair.p, pair.p)
        return [
            pair,
            IndexPair(pf_cl, pair.e & pf_mo),
            IndexPair(pf_cl, pf_mo),
            IndexPair(cl_b, mo_b),
        ]

    seq = half(pair1) + list(reversed(half(pair2)))[1:]
    out: list[IndexPair] = []
    for term in seq:
        if not out or out[-1] != term:
            validate_index_pair(v, term.p, term.e)
            out.append(term)
    for a, b in zip(out, out[1:]):
        if not (a.includes(b) or b.includes(a)):
            raise InputError("adjacent connecting terms are not nested")
    return out
