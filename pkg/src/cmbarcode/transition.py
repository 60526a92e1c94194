"""From a parameterized field to the transition diagram.

A parameterized field is a fence of comparable multivector fields.  Its
finest block partitions form a zigzag filtration of block decompositions;
oversized merges/splits are cascaded into attractor-repeller steps; each
adjacent stage pair yields nested index pairs via a push-forward filtration,
and the per-block pairs of consecutive steps are aligned with connecting
sequences.  The result is a poset of index pairs arranged in columns, with
the AR-split two-arrow paths as the gentle-algebra ideal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import Complex
from .dynamics import (
    BlockDecomposition,
    IndexPair,
    connecting_sequence,
    connection_set,
    finest_block_partition,
    invariant_part,
    push_forward,
    validate_block_decomposition,
    validate_index_pair,
)
from .errors import EngineError, FenceError, InputError
from .mvf import MultivectorField, refinement_relation


@dataclass
class ParameterizedMVF:
    steps: list[MultivectorField]
    relations: list[str]  # adjacent relation: refines | coarsens | equal

    @property
    def complex(self) -> Complex:
        return self.steps[0].complex


def parameterized(fields: list[MultivectorField]) -> ParameterizedMVF:
    """Check the fence condition and derive the adjacent relations."""
    if not fields:
        raise InputError("empty field sequence")
    relations = []
    for lam, (a, b) in enumerate(zip(fields, fields[1:])):
        rel = refinement_relation(a, b)
        if rel == "incomparable":
            raise FenceError(f"fields {lam} and {lam + 1} are not comparable")
        relations.append(rel)
    return ParameterizedMVF(steps=list(fields), relations=relations)


@dataclass
class Stage:
    decomposition: BlockDecomposition
    lam: int
    aux: bool
    name: str

    @property
    def field(self) -> MultivectorField:
        return self.decomposition.field


@dataclass
class Step:
    """One adjacent stage pair, with the fine side resolved."""

    direction: str  # 'refine': blocks split going forward; 'coarsen': they merge
    fine: int  # stage index of the finer side
    coarse: int
    mapping: dict[str, str]  # fine block label -> coarse block label


@dataclass
class ZigzagBlockFiltration:
    stages: list[Stage]
    steps: list[Step]
    cascade_choices: list[dict] = field(default_factory=list)

    def max_preimage(self) -> int:
        best = 1
        for step in self.steps:
            sizes: dict[str, int] = {}
            for q in step.mapping.values():
                sizes[q] = sizes.get(q, 0) + 1
            best = max(best, max(sizes.values(), default=1))
        return best


def indexing_map(coarse_side: BlockDecomposition, fine_side: BlockDecomposition) -> dict[str, str]:
    """Map each fine block to the coarse block containing it; order preserving."""
    mapping: dict[str, str] = {}
    for p, cells in fine_side.blocks.items():
        hits = [q for q, big in coarse_side.blocks.items() if cells <= big]
        if not hits:
            raise InputError(f"fine block {p!r} is contained in no coarse block")
        mapping[p] = hits[0]
    for p, qs in fine_side.below.items():
        for p2 in qs:  # p > p2 in the fine flow order
            q, q2 = mapping[p], mapping[p2]
            if q != q2 and q2 not in coarse_side.below[q]:
                raise EngineError(f"indexing map is not order preserving at {p!r} > {p2!r}")
    return mapping


def _make_step(stages: list[Stage], s: int, relation: str) -> Step:
    if relation in ("refines", "equal"):
        fine, coarse = s, s + 1
        direction = "coarsen"
    else:
        fine, coarse = s + 1, s
        direction = "refine"
    mapping = indexing_map(stages[coarse].decomposition, stages[fine].decomposition)
    return Step(direction=direction, fine=fine, coarse=coarse, mapping=mapping)


def finest_filtration(pm: ParameterizedMVF) -> ZigzagBlockFiltration:
    """Finest block partitions of each field, joined by indexing maps."""
    stages = [
        Stage(decomposition=finest_block_partition(v), lam=lam, aux=False, name=f"B{lam}")
        for lam, v in enumerate(pm.steps)
    ]
    steps = [_make_step(stages, s, rel) for s, rel in enumerate(pm.relations)]
    return ZigzagBlockFiltration(stages=stages, steps=steps)


def _cell_key(c: Complex):
    return lambda x: (c.dim_of[x], x)


def _lexmin_topo(c: Complex, labels: list[str], below: dict[str, frozenset]) -> list[str]:
    """Ascending linear extension (attractors first), smallest label first."""
    key = _cell_key(c)
    remaining = set(labels)
    out: list[str] = []
    placed: set = set()
    while remaining:
        ready = sorted(
            (p for p in remaining if below[p] & remaining <= placed), key=key
        )
        if not ready:
            raise EngineError("flow order contains a cycle")
        out.append(ready[0])
        placed.add(ready[0])
        remaining.discard(ready[0])
    return out


def consistent_orders(
    fine: BlockDecomposition, coarse: BlockDecomposition, mapping: dict[str, str]
) -> tuple[list[str], list[str]]:
    """Linear extensions of both flow orders making the indexing map monotone."""
    c = fine.field.complex
    coarse_linear = _lexmin_topo(c, list(coarse.blocks), coarse.below)
    fine_linear: list[str] = []
    for q in coarse_linear:
        group = [p for p in fine.blocks if mapping[p] == q]
        restricted = {p: fine.below[p] & frozenset(group) for p in group}
        fine_linear.extend(_lexmin_topo(c, group, restricted))
    pos = {p: i for i, p in enumerate(fine_linear)}
    for p, qs in fine.below.items():
        for p2 in qs:
            if pos[p2] > pos[p]:
                raise EngineError(
                    f"filtration-consistent order failed: {p2!r} must precede {p!r}"
                )
    return fine_linear, coarse_linear


def n_sequence(
    fine: BlockDecomposition,
    coarse: BlockDecomposition,
    orders: tuple[list[str], list[str]],
    mapping: dict[str, str],
) -> list[frozenset]:
    """Nested closed sets N_0 = {} within N_1 within ... one per fine block.

    The jump at the last block of each merge group uses the coarse field's
    push forward, which is what makes the group's outer pair a common index
    pair for both fields.  For a pair of block partitions, the sequence is
    just the running union of fine blocks.
    """
    fine_linear, _ = orders
    if fine.ambient != coarse.ambient:
        raise InputError("stages have different ambient regions")
    ambient = fine.ambient
    pos = {p: i for i, p in enumerate(fine_linear)}
    group_max: dict[str, str] = {}
    for p in fine_linear:
        group_max[mapping[p]] = p

    seq = [frozenset()]
    if fine.partition and coarse.partition:
        for p in fine_linear:
            seq.append(seq[-1] | fine.blocks[p])
        return seq
    for p in fine_linear:
        if group_max[mapping[p]] == p:
            grow = push_forward(coarse.field, coarse.blocks[mapping[p]], ambient)
        else:
            grow = push_forward(fine.field, fine.blocks[p], ambient)
        seq.append(seq[-1] | grow)
    return seq


# ---------------------------------------------------------------------------
# cascades


def _merge_once(
    decomp: BlockDecomposition, coarse: BlockDecomposition, mapping: dict[str, str]
) -> tuple[BlockDecomposition, dict]:
    """Merge one convex adjacent pair inside the smallest oversized preimage."""
    c = decomp.field.complex
    key = _cell_key(c)
    groups: dict[str, list[str]] = {}
    for p, q in mapping.items():
        groups.setdefault(q, []).append(p)
    oversized = sorted((q for q, g in groups.items() if len(g) > 2), key=key)
    if not oversized:
        raise EngineError("no oversized preimage to cascade")
    q = oversized[0]
    group = groups[q]
    restricted = {p: decomp.below[p] & frozenset(group) for p in group}
    ext = _lexmin_topo(c, group, restricted)
    a, b = ext[0], ext[1]
    merged = connection_set(
        decomp.field, [decomp.blocks[a], decomp.blocks[b]], decomp.ambient
    )
    others = [cells for p, cells in decomp.blocks.items() if p not in (a, b)]
    new = validate_block_decomposition(decomp.field, others + [merged], decomp.ambient)
    choice = {"into": q, "merged": sorted([a, b]), "result": min(merged, key=key)}
    return new, choice


def make_basic(zf: ZigzagBlockFiltration) -> ZigzagBlockFiltration:
    """Expand oversized steps into attractor-repeller cascades.

    Every inserted auxiliary stage shares the fine side's field and parameter
    value; adjacent stages of the result split or merge at most two blocks at
    a time.  Preimage groups are required to be convex in the fine flow order
    before any merge is attempted.
    """
    stages: list[Stage] = []
    steps: list[Step] = []
    choices: list[dict] = []

    def push_stage(st: Stage, relation_to_prev: str | None) -> None:
        if relation_to_prev is not None:
            steps.append(_make_step_pair(stages[-1], st, relation_to_prev))
        stages.append(st)

    def _make_step_pair(prev: Stage, nxt: Stage, relation: str) -> Step:
        if relation == "coarsen":
            fine_stage, coarse_stage, fine_idx, coarse_idx = prev, nxt, len(stages) - 1, len(stages)
        else:
            fine_stage, coarse_stage, fine_idx, coarse_idx = nxt, prev, len(stages), len(stages) - 1
        mapping = indexing_map(coarse_stage.decomposition, fine_stage.decomposition)
        return Step(direction=relation if relation == "refine" else "coarsen",
                    fine=fine_idx, coarse=coarse_idx, mapping=mapping)

    push_stage(zf.stages[0], None)
    for i, step in enumerate(zf.steps):
        fine_stage = zf.stages[step.fine]
        coarse_stage = zf.stages[step.coarse]
        _assert_convex_preimages(fine_stage.decomposition, step.mapping)

        chain: list[BlockDecomposition] = []
        current = fine_stage.decomposition
        mapping = dict(step.mapping)
        while max(_group_sizes(mapping).values(), default=1) > 2:
            current, choice = _merge_once(current, coarse_stage.decomposition, mapping)
            choice["between_lambdas"] = sorted([fine_stage.lam, coarse_stage.lam])
            choices.append(choice)
            chain.append(current)
            mapping = indexing_map(coarse_stage.decomposition, current)

        aux = [
            Stage(
                decomposition=d,
                lam=fine_stage.lam,
                aux=True,
                name=f"{fine_stage.name}.{i}.{j + 1}",
            )
            for j, d in enumerate(chain)
        ]
        if step.direction == "refine":
            # coarse stage is already in place; walk down the cascade
            for st in reversed(aux):
                push_stage(st, "refine")
            push_stage(zf.stages[i + 1], "refine")
        else:
            for st in aux:
                push_stage(st, "coarsen")
            push_stage(zf.stages[i + 1], "coarsen")

    out = ZigzagBlockFiltration(stages=stages, steps=steps, cascade_choices=choices)
    if out.max_preimage() > 2:
        raise EngineError("cascading left an oversized step")
    return out


def _group_sizes(mapping: dict[str, str]) -> dict[str, int]:
    sizes: dict[str, int] = {}
    for q in mapping.values():
        sizes[q] = sizes.get(q, 0) + 1
    return sizes


def _assert_convex_preimages(fine: BlockDecomposition, mapping: dict[str, str]) -> None:
    groups: dict[str, set] = {}
    for p, q in mapping.items():
        groups.setdefault(q, set()).add(p)
    for q, group in groups.items():
        for p in group:
            for r in fine.below[p]:
                if r in group:
                    continue
                if group & fine.below[r]:
                    raise EngineError(
                        f"preimage of {q!r} is not convex: {r!r} sits between its members"
                    )


# ---------------------------------------------------------------------------
# diagram assembly


@dataclass(frozen=True)
class DiagramNode:
    idx: int
    col: int
    stage: int
    block: str
    pair: IndexPair
    role: str  # 'step' or 'align'


@dataclass
class ARSplitRecord:
    n0: frozenset
    n1: frozenset
    n2: frozenset
    attractor: int
    repeller: int
    whole: int
    attractor_block: str
    repeller_block: str
    whole_block: str
    step: int
    direction: str
    lam_fine: int
    lam_coarse: int


@dataclass
class TransitionDiagram:
    filtration: ZigzagBlockFiltration
    complex: Complex
    nodes: list[DiagramNode]
    arrows: list[tuple[int, int]]  # (src, dst): pair(src) included in pair(dst)
    ideal: list[tuple[int, int]]  # pairs of arrow indices (i then j)
    splits: list[ARSplitRecord]
    col_lambda: list[int]

    @property
    def n_cols(self) -> int:
        return len(self.col_lambda)

    def nodes_in_col(self, col: int) -> list[DiagramNode]:
        return [n for n in self.nodes if n.col == col]

    def neighbors(self) -> tuple[dict[int, list[tuple[int, int]]], dict[int, list[tuple[int, int]]]]:
        """Per node: outgoing and incoming (arrow index, other node) lists."""
        out: dict[int, list[tuple[int, int]]] = {n.idx: [] for n in self.nodes}
        inc: dict[int, list[tuple[int, int]]] = {n.idx: [] for n in self.nodes}
        for k, (a, b) in enumerate(self.arrows):
            out[a].append((k, b))
            inc[b].append((k, a))
        return out, inc


@dataclass
class _StepPairs:
    fine_pairs: dict[str, IndexPair]
    coarse_pairs: dict[str, IndexPair]
    triples: dict[str, tuple[frozenset, frozenset, frozenset, str, str]]
    # coarse label -> (n0, n1, n2, attractor fine label, repeller fine label)


def _step_pairs(zf: ZigzagBlockFiltration, i: int) -> _StepPairs:
    step = zf.steps[i]
    fine = zf.stages[step.fine].decomposition
    coarse = zf.stages[step.coarse].decomposition
    orders = consistent_orders(fine, coarse, step.mapping)
    seq = n_sequence(fine, coarse, orders, step.mapping)
    fine_linear, _ = orders
    pos = {p: k for k, p in enumerate(fine_linear)}

    fine_pairs: dict[str, IndexPair] = {}
    for p in fine_linear:
        pair = IndexPair(seq[pos[p] + 1], seq[pos[p]])
        got = validate_index_pair(fine.field, pair.p, pair.e)
        want = invariant_part(fine.field, fine.blocks[p])
        if got != want:
            raise EngineError(f"filtration pair of block {p!r} isolates the wrong set")
        fine_pairs[p] = pair

    groups: dict[str, list[str]] = {}
    for p in fine_linear:
        groups.setdefault(step.mapping[p], []).append(p)

    coarse_pairs: dict[str, IndexPair] = {}
    triples: dict[str, tuple] = {}
    for q in coarse.blocks:
        group = groups.get(q, [])
        if not group:
            cl = coarse.field.complex.closure(coarse.blocks[q])
            coarse_pairs[q] = IndexPair(cl, cl - coarse.blocks[q])
            validate_index_pair(coarse.field, coarse_pairs[q].p, coarse_pairs[q].e)
            continue
        top = pos[group[-1]] + 1
        pair = IndexPair(seq[top], seq[top - len(group)])
        validate_index_pair(fine.field, pair.p, pair.e)
        got = validate_index_pair(coarse.field, pair.p, pair.e)
        want = invariant_part(coarse.field, coarse.blocks[q])
        if got != want:
            raise EngineError(f"common pair of block {q!r} isolates the wrong set")
        coarse_pairs[q] = pair
        if len(group) == 2:
            a, r = group
            if pos[r] != pos[a] + 1:
                raise EngineError("merge group is not consecutive in the fine order")
            triples[q] = (seq[pos[a]], seq[pos[a] + 1], seq[pos[r] + 1], a, r)
        elif len(group) > 2:
            raise EngineError("assemble requires a basic filtration")
    return _StepPairs(fine_pairs=fine_pairs, coarse_pairs=coarse_pairs, triples=triples)


def _align_sequences(
    zf: ZigzagBlockFiltration,
    s: int,
    left: dict[str, IndexPair],
    right: dict[str, IndexPair],
) -> dict[str, list[IndexPair]]:
    """Per-block zigzags from the left pair to the right pair of stage s."""
    stage = zf.stages[s]
    out: dict[str, list[IndexPair]] = {}
    for p, cells in stage.decomposition.blocks.items():
        lp, rp = left[p], right[p]
        if lp == rp:
            seq = [lp]
        elif lp.includes(rp) or rp.includes(lp):
            seq = [lp, rp]
        else:
            core = invariant_part(stage.field, cells)
            seq = connecting_sequence(stage.field, lp, rp, core)
        out[p] = seq
    width = max(len(s_) for s_ in out.values())
    for p, seq in out.items():
        out[p] = [seq[0]] * (width - len(seq)) + seq
    return out


def assemble(zf: ZigzagBlockFiltration) -> TransitionDiagram:
    """Build the transition diagram of a basic zigzag filtration."""
    if zf.max_preimage() > 2:
        raise InputError("filtration is not basic; run make_basic first")
    cx = zf.stages[0].field.complex

    nodes: list[DiagramNode] = []
    arrows: list[tuple[int, int]] = []
    ideal: list[tuple[int, int]] = []
    splits: list[ARSplitRecord] = []
    col_lambda: list[int] = []

    def new_col(lam: int) -> int:
        col_lambda.append(lam)
        return len(col_lambda) - 1

    def add_node(col: int, stage: int, block: str, pair: IndexPair, role: str) -> int:
        nodes.append(DiagramNode(len(nodes), col, stage, block, pair, role))
        return nodes[-1].idx

    def add_arrow(src: int, dst: int) -> int:
        if not nodes[dst].pair.includes(nodes[src].pair):
            raise EngineError("arrow without inclusion")
        arrows.append((src, dst))
        return len(arrows) - 1

    if not zf.steps:
        stage = zf.stages[0]
        col = new_col(stage.lam)
        for p in stage.decomposition.labels():
            cl = cx.closure(stage.decomposition.blocks[p])
            add_node(col, 0, p, IndexPair(cl, cl - stage.decomposition.blocks[p]), "step")
        return TransitionDiagram(zf, cx, nodes, arrows, ideal, splits, col_lambda)

    step_pairs = [_step_pairs(zf, i) for i in range(len(zf.steps))]

    def side_pairs(i: int, stage_idx: int) -> dict[str, IndexPair]:
        sp = step_pairs[i]
        return sp.fine_pairs if zf.steps[i].fine == stage_idx else sp.coarse_pairs

    # column of stage 0
    right_nodes: dict[str, int] = {}
    col = new_col(zf.stages[0].lam)
    for p in sorted(side_pairs(0, 0)):
        right_nodes[p] = add_node(col, 0, p, side_pairs(0, 0)[p], "step")

    for i, step in enumerate(zf.steps):
        s_next = i + 1
        col = new_col(zf.stages[s_next].lam)
        left_nodes = {
            p: add_node(col, s_next, p, pair, "step")
            for p, pair in sorted(side_pairs(i, s_next).items())
        }
        fine_nodes = left_nodes if step.fine == s_next else right_nodes
        coarse_nodes = right_nodes if step.fine == s_next else left_nodes
        sp = step_pairs[i]
        handled: set = set()
        for q, (n0, n1, n2, a, r) in sorted(sp.triples.items()):
            ia = add_arrow(fine_nodes[a], coarse_nodes[q])
            ij = add_arrow(coarse_nodes[q], fine_nodes[r])
            ideal.append((ia, ij))
            splits.append(
                ARSplitRecord(
                    n0=n0, n1=n1, n2=n2,
                    attractor=fine_nodes[a], repeller=fine_nodes[r],
                    whole=coarse_nodes[q],
                    attractor_block=a, repeller_block=r, whole_block=q,
                    step=i, direction=step.direction,
                    lam_fine=zf.stages[step.fine].lam,
                    lam_coarse=zf.stages[step.coarse].lam,
                )
            )
            handled |= {a, r}
        for p, q in sorted(step.mapping.items()):
            if p in handled:
                continue
            # singleton preimage: the two nodes carry the same pair
            fn, cn = fine_nodes[p], coarse_nodes[q]
            early, late = (fn, cn) if nodes[fn].col < nodes[cn].col else (cn, fn)
            add_arrow(early, late)

        if s_next == len(zf.stages) - 1:
            break

        # alignment of stage s_next between this step and the next
        seqs = _align_sequences(zf, s_next, side_pairs(i, s_next), side_pairs(i + 1, s_next))
        width = max(len(sq) for sq in seqs.values())
        current = left_nodes
        for k in range(1, width):
            col = new_col(zf.stages[s_next].lam)
            nxt: dict[str, int] = {}
            for p in sorted(seqs):
                nxt[p] = add_node(col, s_next, p, seqs[p][k], "align")
                a_pair, b_pair = seqs[p][k - 1], seqs[p][k]
                if b_pair.includes(a_pair):
                    add_arrow(current[p], nxt[p])
                else:
                    add_arrow(nxt[p], current[p])
            current = nxt
        right_nodes = current

    return TransitionDiagram(zf, cx, nodes, arrows, ideal, splits, col_lambda)


def build_diagram(pm: ParameterizedMVF) -> TransitionDiagram:
    """Finest filtration, cascades, assembly: the whole front half."""
    return assemble(make_basic(finest_filtration(pm)))
