"""Instance generators that embed hard source problems, plus witnesses.

Each generator returns (instance, layout); the layout records vertex
ids by role so tests and witness builders can address the gadgets.  The
witness builders turn a certificate of the source problem (satisfying
assignment, triple partition, packing) into a partition that passes the
stability verifiers; they regenerate the instance internally, which is
cheap and keeps ids aligned by construction order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .decomposition import square_instance
from .game import AshgInstance, Partition


@dataclass(frozen=True)
class CnfFormula:
    """CNF with exactly three literal slots per clause.

    Variables are x_0..x_{num_vars-1}; a literal is the signed integer
    ±(index + 1) as in DIMACS.  Slots may repeat (shorter clauses are
    padded by repetition in from_clauses).
    """

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        for ci, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise ValueError(f"clause {ci} does not have exactly 3 literal slots")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {ci} has invalid literal {lit}")

    @classmethod
    def from_clauses(cls, num_vars: int, clauses) -> "CnfFormula":
        padded = []
        for clause in clauses:
            lits = list(clause)
            if not 1 <= len(lits) <= 3:
                raise ValueError(f"clause {lits} must have 1..3 literals")
            while len(lits) < 3:
                lits.append(lits[-1])
            padded.append(tuple(lits))
        return cls(num_vars, tuple(padded))

    def is_satisfied_by(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.num_vars:
            raise ValueError(
                f"assignment has {len(assignment)} values for {self.num_vars} variables"
            )
        return all(
            any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause)
            for clause in self.clauses
        )


class _Builder:
    """Arc accumulator that rejects accidental duplicate ordered pairs."""

    def __init__(self):
        self.arcs: dict[tuple[int, int], int] = {}
        self.count = 0
        self.roles: dict[int, str] = {}

    def vertex(self, role: str) -> int:
        self.count += 1
        self.roles[self.count] = role
        return self.count

    def arc(self, u: int, v: int, w: int) -> None:
        if (u, v) in self.arcs:
            raise AssertionError(f"generator bug: duplicate arc ({u},{v})")
        self.arcs[(u, v)] = w

    def instance(self) -> AshgInstance:
        return AshgInstance(self.count, self.arcs)


# ---------------------------------------------------------------------------
# SAT embedding with a degree parameter (weights up to 4^degree)


@dataclass(frozen=True)
class SatHighDegreeLayout:
    num_vars: int
    num_clauses: int
    degree: int  # rounded up to a power of two
    bit_width: int  # log2(degree): variables encoded per selection vertex
    block: int  # degree * bit_width: variables encoded per row
    rows: int  # encoding rows 0..rows-1; row `rows` is the anchor row
    palette: int
    palette_partner: int
    selection: dict[tuple[int, int, int], int]  # (row, slot, column) -> id
    consistency: dict[tuple[int, int], int]  # (row, column) -> id
    clause_hub: dict[int, int]  # column -> id
    clause_partner: dict[int, int]
    literal: dict[tuple[int, int], int]  # (column, slot 0..2) -> id
    roles: dict[int, str] = field(repr=False)

    def var_coords(self, k: int) -> tuple[int, int, int]:
        """Row, slot and bit position encoding variable x_k."""
        i1, rest = divmod(k, self.block)
        i2, i3 = divmod(rest, self.bit_width)
        return i1, i2, i3


def gen_sat_high_degree(phi: CnfFormula, degree: int) -> tuple[AshgInstance, SatHighDegreeLayout]:
    """Embed a 3-CNF into a game whose stable partitions encode assignments.

    `degree` (rounded up to a power of two, at least 2) controls how many
    variables each selection vertex carries; weights reach 4^degree.  A
    grid of selection vertices (one row block per degree*log2(degree)
    variables, one column per clause, plus one anchor row) is pulled into
    `degree` row-coalitions seeded by an anchor pair; consistency
    vertices force equal choices across columns, and each clause column
    has a hub that a literal vertex can only leave when its literal is
    satisfied by the encoded assignment.
    """
    if degree < 2:
        raise ValueError(f"degree must be at least 2, got {degree}")
    d = 1 << (degree - 1).bit_length()
    n, m = phi.num_vars, len(phi.clauses)
    if n >= 2 and d >= n / math.log2(n):
        warnings.warn(
            f"degree {d} is not below n/log2(n) = {n / math.log2(n):.2f}; "
            "the construction is emitted anyway",
            stacklevel=2,
        )
    log_d = d.bit_length() - 1
    block = d * log_d
    rows = -(-n // block)  # ceil; encoding rows 0..rows-1, anchor row = rows

    b = _Builder()
    p = b.vertex("palette")
    pp = b.vertex("palette-partner")
    sel = {
        (i1, i2, j): b.vertex("selection")
        for i1 in range(rows + 1)
        for i2 in range(d)
        for j in range(1, m + 1)
    }
    cons = {
        (i1, j): b.vertex("consistency")
        for i1 in range(rows + 1)
        for j in range(1, m)
    }
    hub = {}
    partner = {}
    lit_v = {}
    for j in range(1, m + 1):
        hub[j] = b.vertex("clause-hub")
        partner[j] = b.vertex("clause-partner")
        for a in range(3):
            lit_v[(j, a)] = b.vertex("literal")

    b.arc(p, pp, 1)
    b.arc(pp, p, 1)
    for i2 in range(d):
        if m >= 1:
            b.arc(p, sel[(rows, i2, 1)], 1)
            b.arc(sel[(rows, i2, 1)], p, -1)

    for (i1, j), c in cons.items():
        for i2 in range(d):
            b.arc(c, sel[(i1, i2, j)], 4**i2)
            b.arc(c, sel[(i1, i2, j + 1)], -(4**i2))
            b.arc(sel[(i1, i2, j)], c, -(4**d))
            b.arc(sel[(i1, i2, j + 1)], c, -(4**d))

    layout = SatHighDegreeLayout(
        num_vars=n,
        num_clauses=m,
        degree=d,
        bit_width=log_d,
        block=block,
        rows=rows,
        palette=p,
        palette_partner=pp,
        selection=sel,
        consistency=cons,
        clause_hub=hub,
        clause_partner=partner,
        literal=lit_v,
        roles=b.roles,
    )

    for j, clause in enumerate(phi.clauses, start=1):
        b.arc(hub[j], partner[j], 2)
        for a, lit in enumerate(clause):
            lv = lit_v[(j, a)]
            b.arc(lv, hub[j], 2)
            b.arc(hub[j], lv, -1)
            k = abs(lit) - 1
            i1, i2, i3 = layout.var_coords(k)
            b.arc(lv, sel[(i1, i2, j)], 1)
            for alt in range(d):
                bit = (alt >> i3) & 1
                satisfied = bit == 1 if lit > 0 else bit == 0
                b.arc(lv, sel[(rows, alt, j)], 1 if satisfied else 0)

    return b.instance(), layout


def _encoded_row_choice(layout: SatHighDegreeLayout, assignment: Sequence[bool], i1: int, i2: int) -> int:
    """Anchor-row index encoding the assignment bits carried by (i1, i2)."""
    value = 0
    for i3 in range(layout.bit_width):
        k = i1 * layout.block + i2 * layout.bit_width + i3
        if k < layout.num_vars and assignment[k]:
            value |= 1 << i3
    return value


def witness_sat_high_degree(
    phi: CnfFormula, degree: int, assignment: Sequence[bool]
) -> Partition:
    """Partition certifying stability for a satisfying assignment."""
    if not phi.is_satisfied_by(assignment):
        raise ValueError("assignment does not satisfy the formula")
    instance, lay = gen_sat_high_degree(phi, degree)
    m, d = lay.num_clauses, lay.degree

    blocks: list[list[int]] = [[lay.palette, lay.palette_partner]]
    blocks.extend([c] for c in lay.consistency.values())
    row_block: dict[int, list[int]] = {
        i2: [lay.selection[(lay.rows, i2, j)] for j in range(1, m + 1)] for i2 in range(d)
    }
    for i1 in range(lay.rows):
        for i2 in range(d):
            choice = _encoded_row_choice(lay, assignment, i1, i2)
            row_block[choice].extend(
                lay.selection[(i1, i2, j)] for j in range(1, m + 1)
            )
    for j, clause in enumerate(phi.clauses, start=1):
        chosen = next(
            a for a, lit in enumerate(clause) if assignment[abs(lit) - 1] == (lit > 0)
        )
        k = abs(clause[chosen]) - 1
        i1, i2, _ = lay.var_coords(k)
        row_block[_encoded_row_choice(lay, assignment, i1, i2)].append(
            lay.literal[(j, chosen)]
        )
        blocks.append(
            [lay.clause_hub[j], lay.clause_partner[j]]
            + [lay.literal[(j, a)] for a in range(3) if a != chosen]
        )
    if m >= 1:
        blocks.extend(row_block.values())
    return Partition.from_blocks(blocks, instance.n)


# ---------------------------------------------------------------------------
# SAT embedding with weights in {-2,-1,1,2} and constant degree


@dataclass(frozen=True)
class SatBoundedDegreeLayout:
    num_vars: int  # after rounding up to a power of 4
    original_vars: int
    num_clauses: int
    side: int  # sqrt(num_vars): number of palette paths
    half_bits: int  # log2(num_vars)/2: variables per selection path
    length: int  # path length: clauses + num_vars
    num_selection: int
    palette: dict[tuple[int, int], int]  # (path, column) -> id
    selection: dict[tuple[int, int], int]
    pair_a: dict[tuple[int, int], int]  # (path, path') -> id
    pair_b: dict[tuple[int, int], int]
    literal_path: dict[tuple[int, int, int], int]  # (column, slot, step) -> id
    checker: dict[tuple[int, int, int], int]  # (column, slot, palette path) -> id
    checker_order: dict[int, tuple[tuple[int, int, int], ...]]  # column -> keys
    or_main: dict[tuple[int, int], int]  # (column, 1-based index) -> id
    or_partner: dict[tuple[int, int], int]
    or_blocker: dict[tuple[int, int], int]
    roles: dict[int, str] = field(repr=False)

    def path_of_var(self, k: int) -> tuple[int, int]:
        """Selection path index and bit position carrying variable x_k."""
        return k // self.half_bits, k % self.half_bits


def gen_sat_bounded_degree(phi: CnfFormula) -> tuple[AshgInstance, SatBoundedDegreeLayout]:
    """Embed a 3-CNF with all weights in {-2,-1,1,2} and bounded degree.

    The variable count is rounded up to a power of 4 with dummy
    variables.  sqrt(n) palette paths act as group identities; each
    selection path must follow one of them, encoding log2(n)/2 variable
    values by its choice.  Pair gadgets keep distinct palette paths in
    distinct coalitions, literal paths feed each clause's checkers, and
    a chain gadget per clause is stable exactly when at least one
    checker confirms its literal against the chosen palette path.
    """
    nv = 4
    while nv < phi.num_vars:
        nv *= 4
    s = math.isqrt(nv)
    logn = nv.bit_length() - 1
    half = logn // 2
    m = len(phi.clauses)
    length = m + nv
    n_sel = (2 * nv) // logn + 1

    b = _Builder()
    pal = {
        (i, j): b.vertex("palette-path")
        for i in range(s)
        for j in range(1, length + 1)
    }
    sel = {
        (i, j): b.vertex("selection-path")
        for i in range(n_sel)
        for j in range(1, length + 1)
    }
    for i in range(s):
        for j in range(1, length):
            b.arc(pal[(i, j + 1)], pal[(i, j)], 1)
    for i in range(n_sel):
        for j in range(1, length):
            b.arc(sel[(i, j + 1)], sel[(i, j)], 1)

    pair_a = {}
    pair_b = {}
    pairs = [(i, ip) for i in range(s) for ip in range(i + 1, s)]
    for offset, (i, ip) in enumerate(pairs):
        j = m + 1 + offset  # distinct column in m+1..m+nv-1
        va = b.vertex("pair-a")
        vb = b.vertex("pair-b")
        pair_a[(i, ip)] = va
        pair_b[(i, ip)] = vb
        b.arc(va, pal[(i, j)], 1)
        b.arc(va, pal[(ip, j)], -1)
        b.arc(va, vb, 1)
        b.arc(vb, va, -1)
        b.arc(vb, pal[(i, j)], -1)
        b.arc(vb, pal[(ip, j)], -1)

    lit_path: dict[tuple[int, int, int], int] = {}
    chk: dict[tuple[int, int, int], int] = {}
    chk_order: dict[int, tuple[tuple[int, int, int], ...]] = {}
    or_main: dict[tuple[int, int], int] = {}
    or_partner: dict[tuple[int, int], int] = {}
    or_blocker: dict[tuple[int, int], int] = {}

    for j, clause in enumerate(phi.clauses, start=1):
        keys = []
        for a, lit in enumerate(clause):
            k = abs(lit) - 1
            i_path, pos = k // half, k % half
            for beta in range(s):
                lit_path[(j, a, beta)] = b.vertex("literal-path")
            for beta in range(s - 1):
                b.arc(lit_path[(j, a, beta)], lit_path[(j, a, beta + 1)], 1)
            b.arc(lit_path[(j, a, s - 1)], sel[(i_path, j)], 1)
            for ip in range(s):
                bit = (ip >> pos) & 1
                if (bit == 1) == (lit > 0):
                    c = b.vertex("checker")
                    chk[(j, a, ip)] = c
                    keys.append((j, a, ip))
                    b.arc(c, pal[(ip, j)], 1)
                    b.arc(c, lit_path[(j, a, ip)], 1)
        chk_order[j] = tuple(keys)

        count = len(keys)
        for q in range(1, count + 1):
            or_main[(j, q)] = b.vertex("or-main")
            or_partner[(j, q)] = b.vertex("or-partner")
            or_blocker[(j, q)] = b.vertex("or-blocker")
        for q in range(1, count + 1):
            b.arc(or_main[(j, q)], or_partner[(j, q)], 1)
            b.arc(or_main[(j, q)], or_blocker[(j, q)], -2)
            if q < count:
                b.arc(or_main[(j, q)], or_main[(j, q + 1)], 2)
                b.arc(or_main[(j, q + 1)], or_main[(j, q)], -1)
        for q, key in enumerate(keys, start=1):
            c = chk[key]
            if q == 1:
                b.arc(or_main[(j, 1)], c, -2)
                b.arc(c, or_main[(j, 1)], 2)
            else:
                b.arc(or_main[(j, q)], c, -1)
                b.arc(c, or_main[(j, q)], 2)

    layout = SatBoundedDegreeLayout(
        num_vars=nv,
        original_vars=phi.num_vars,
        num_clauses=m,
        side=s,
        half_bits=half,
        length=length,
        num_selection=n_sel,
        palette=pal,
        selection=sel,
        pair_a=pair_a,
        pair_b=pair_b,
        literal_path=lit_path,
        checker=chk,
        checker_order=chk_order,
        or_main=or_main,
        or_partner=or_partner,
        or_blocker=or_blocker,
        roles=b.roles,
    )
    return b.instance(), layout


def _encoded_palette_choice(lay: SatBoundedDegreeLayout, ext: Sequence[bool], i: int) -> int:
    """Palette path encoding the bits carried by selection path i."""
    value = 0
    for pos in range(lay.half_bits):
        k = i * lay.half_bits + pos
        if k < lay.num_vars and ext[k]:
            value |= 1 << pos
    return value


def witness_sat_bounded_degree(phi: CnfFormula, assignment: Sequence[bool]) -> Partition:
    """Partition certifying stability for a satisfying assignment.

    Dummy variables from rounding are taken as false.  Per clause, the
    chain gadget is split at the confirmed checker's index.
    """
    if not phi.is_satisfied_by(assignment):
        raise ValueError("assignment does not satisfy the formula")
    instance, lay = gen_sat_bounded_degree(phi)
    ext = list(assignment) + [False] * (lay.num_vars - lay.original_vars)

    group: dict[int, list[int]] = {
        i: [lay.palette[(i, j)] for j in range(1, lay.length + 1)] for i in range(lay.side)
    }
    for i in range(lay.num_selection):
        choice = _encoded_palette_choice(lay, ext, i)
        group[choice].extend(lay.selection[(i, j)] for j in range(1, lay.length + 1))
    blocks: list[list[int]] = []
    for (i, ip), va in lay.pair_a.items():
        group[i].append(va)
        blocks.append([lay.pair_b[(i, ip)]])

    for j, clause in enumerate(phi.clauses, start=1):
        for a, lit in enumerate(clause):
            k = abs(lit) - 1
            i_path = k // lay.half_bits
            group[_encoded_palette_choice(lay, ext, i_path)].extend(
                lay.literal_path[(j, a, beta)] for beta in range(lay.side)
            )
        chosen_slot = next(
            a for a, lit in enumerate(clause) if assignment[abs(lit) - 1] == (lit > 0)
        )
        k = abs(clause[chosen_slot]) - 1
        i_path = k // lay.half_bits
        ip = _encoded_palette_choice(lay, ext, i_path)
        keys = lay.checker_order[j]
        split = keys.index((j, chosen_slot, ip)) + 1
        count = len(keys)
        group[ip].append(lay.checker[(j, chosen_slot, ip)])

        chain = []
        for q in range(1, split + 1):
            chain.append(lay.or_main[(j, q)])
            chain.append(lay.or_partner[(j, q)])
        chain.extend(lay.checker[key] for key in keys[: split - 1])
        blocks.append(chain)
        for q in range(split, count):
            blocks.append(
                [
                    lay.or_blocker[(j, q)],
                    lay.or_main[(j, q + 1)],
                    lay.or_partner[(j, q + 1)],
                    lay.checker[keys[q]],
                ]
            )
        for q in range(1, split):
            blocks.append([lay.or_blocker[(j, q)]])
        blocks.append([lay.or_blocker[(j, count)]])

    blocks.extend(group.values())
    return Partition.from_blocks(blocks, instance.n)


# ---------------------------------------------------------------------------
# 3-Partition star


@dataclass(frozen=True)
class ThreePartitionLayout:
    items: tuple[int, ...]
    target: int
    item_ids: tuple[int, ...]
    slot_ids: tuple[int, ...]  # one per triple to be formed
    center: int
    center_partner: int
    roles: dict[int, str] = field(repr=False)


def gen_three_partition_star(
    items: Sequence[int], target: int
) -> tuple[AshgInstance, ThreePartitionLayout]:
    """Star-shaped instance whose stable partitions are triple packings.

    Requires the normal form: 3t items, each strictly between target/4
    and target/2, summing to t*target.  The center wants 2*target from
    each slot vertex and -weight from each item; everyone mildly
    dislikes the center, so a coalition with the center only breaks even
    for the center when it is the full star or a slot plus a triple
    summing exactly to target elsewhere is removed -- which is what
    forces the items into exact triples.
    """
    items = tuple(int(x) for x in items)
    if len(items) == 0 or len(items) % 3 != 0:
        raise ValueError(f"item count {len(items)} is not a positive multiple of 3")
    t = len(items) // 3
    for x in items:
        if not (4 * x > target and 2 * x < target):
            raise ValueError(f"item {x} is not strictly between {target}/4 and {target}/2")
    if sum(items) != t * target:
        raise ValueError(f"items sum to {sum(items)}, expected {t * target}")

    b = _Builder()
    item_ids = tuple(b.vertex("item") for _ in items)
    slot_ids = tuple(b.vertex("slot") for _ in range(t))
    center = b.vertex("center")
    partner = b.vertex("center-partner")
    for v in item_ids + slot_ids:
        b.arc(v, center, -1)
    for v in slot_ids:
        b.arc(center, v, 2 * target)
    for v, x in zip(item_ids, items):
        b.arc(center, v, -x)
    b.arc(center, partner, target)
    b.arc(partner, center, 1)
    layout = ThreePartitionLayout(
        items=items,
        target=target,
        item_ids=item_ids,
        slot_ids=slot_ids,
        center=center,
        center_partner=partner,
        roles=b.roles,
    )
    return b.instance(), layout


def witness_three_partition_star(
    items: Sequence[int], target: int, triples: Sequence[Sequence[int]]
) -> Partition:
    """Partition for a valid triple cover (1-based item indices)."""
    instance, lay = gen_three_partition_star(items, target)
    t = len(lay.items) // 3
    seen: set[int] = set()
    for triple in triples:
        if len(triple) != 3:
            raise ValueError(f"triple {triple} does not have 3 items")
        if sum(lay.items[i - 1] for i in triple) != target:
            raise ValueError(f"triple {triple} does not sum to {target}")
        seen.update(triple)
    if len(triples) != t or seen != set(range(1, 3 * t + 1)):
        raise ValueError("triples do not cover every item exactly once")
    blocks = [[lay.center, lay.center_partner]]
    for slot, triple in zip(lay.slot_ids, triples):
        blocks.append([lay.item_ids[i - 1] for i in triple] + [slot])
    return Partition.from_blocks(blocks, instance.n)


# ---------------------------------------------------------------------------
# Bin packing


@dataclass(frozen=True)
class BinPackingLayout:
    items: tuple[int, ...]  # including padding
    original_count: int
    capacity: int
    bins: int
    bin_ids: tuple[int, ...]
    anchor_ids: tuple[int, ...]
    item_ids: tuple[int, ...]
    expansion: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    roles: dict[int, str] = field(default_factory=dict, repr=False)


def gen_bin_packing(
    items: Sequence[int], capacity: int, bins: int, unit_weights: bool = False
) -> tuple[AshgInstance, BinPackingLayout]:
    """Instance whose connected stable partitions are exact packings.

    Items are padded with 1s until they total bins*capacity (an error if
    they already exceed it).  Every item is worth its negative weight to
    every bin vertex and 1 to itself in any bin, and each bin gets
    `capacity` from its anchor, so a bin breaks even exactly when full.
    With unit_weights every arc of weight |w| > 1 is expanded through
    |w| relay vertices, leaving all weights in {-1, 1}.
    """
    items = tuple(int(x) for x in items)
    if any(x < 1 for x in items):
        raise ValueError("item weights must be positive")
    if capacity < 1 or bins < 1:
        raise ValueError("capacity and bin count must be positive")
    total = sum(items)
    if total > capacity * bins:
        raise ValueError(
            f"items sum to {total} > {capacity * bins}; padding cannot balance them"
        )
    padded = items + (1,) * (capacity * bins - total)

    b = _Builder()
    bin_ids = tuple(b.vertex("bin") for _ in range(bins))
    anchor_ids = tuple(b.vertex("bin-anchor") for _ in range(bins))
    item_ids = tuple(b.vertex("item") for _ in padded)
    base_arcs: list[tuple[int, int, int]] = []
    for bi, ai in zip(bin_ids, anchor_ids):
        base_arcs.append((bi, ai, capacity))
    for v, x in zip(item_ids, padded):
        for bi in bin_ids:
            base_arcs.append((v, bi, 1))
            base_arcs.append((bi, v, -x))

    expansion: dict[tuple[int, int], tuple[int, ...]] = {}
    for u, v, w in base_arcs:
        if unit_weights and abs(w) > 1:
            relays = tuple(b.vertex("relay") for _ in range(abs(w)))
            expansion[(u, v)] = relays
            sign = 1 if w > 0 else -1
            for r in relays:
                b.arc(u, r, sign)
                b.arc(r, v, 1)
        else:
            b.arc(u, v, w)

    layout = BinPackingLayout(
        items=padded,
        original_count=len(items),
        capacity=capacity,
        bins=bins,
        bin_ids=bin_ids,
        anchor_ids=anchor_ids,
        item_ids=item_ids,
        expansion=expansion,
        roles=b.roles,
    )
    return b.instance(), layout


def witness_bin_packing(
    items: Sequence[int],
    capacity: int,
    bins: int,
    packing: Sequence[int],
    unit_weights: bool = False,
) -> Partition:
    """Partition for a feasible packing (bin index 1..bins per item).

    Padding items are placed greedily into the remaining capacity, which
    always works because padding balances the totals exactly.
    """
    instance, lay = gen_bin_packing(items, capacity, bins, unit_weights)
    if len(packing) != lay.original_count:
        raise ValueError(f"packing assigns {len(packing)} of {lay.original_count} items")
    load = [0] * (bins + 1)
    full = list(packing)
    for t, bin_no in enumerate(packing):
        if not 1 <= bin_no <= bins:
            raise ValueError(f"bin index {bin_no} out of range")
        load[bin_no] += lay.items[t]
    for t in range(lay.original_count, len(lay.items)):
        bin_no = next(i for i in range(1, bins + 1) if load[i] < capacity)
        load[bin_no] += 1
        full.append(bin_no)
    if any(load[i] != capacity for i in range(1, bins + 1)):
        raise ValueError("packing does not fill every bin exactly")

    blocks: dict[int, list[int]] = {
        i: [lay.bin_ids[i - 1], lay.anchor_ids[i - 1]] for i in range(1, bins + 1)
    }
    item_bin: dict[int, int] = {}
    for t, bin_no in enumerate(full):
        blocks[bin_no].append(lay.item_ids[t])
        item_bin[lay.item_ids[t]] = bin_no
    for (u, v), relays in lay.expansion.items():
        if v in item_bin:
            blocks[item_bin[v]].extend(relays)  # relays of (bin -> item) arcs
        else:
            home = lay.anchor_ids.index(v) + 1  # relays of (bin -> anchor) arcs
            blocks[home].extend(relays)
    return Partition.from_blocks(blocks.values(), instance.n)


# ---------------------------------------------------------------------------
# Squaring


def square_zero_arcs(instance: AshgInstance) -> AshgInstance:
    """Add zero-weight arc pairs between all vertices at distance two.

    Utilities are untouched; the squared instance has a connected stable
    partition exactly when the original has a plain stable one, because
    any coalition can be split along distance >= 3 gaps without changing
    anyone's utility.
    """
    return square_instance(instance)
