"""Stable colorings and the treewidth-based Nash stability solver.

A stable k-coloring assigns every vertex one of k colors so that each
vertex weakly prefers its own color class to every other class and to
the guaranteed-empty class k+1 (which forces own utility >= 0).  Only
the colors of out-neighbors matter.  Nonempty classes of a stable
coloring form a Nash Stable partition, and conversely a Nash Stable
partition yields a stable k-coloring once k reaches (max bag size of a
decomposition) * (max degree), which is what makes the bag-by-bag
dynamic program below a complete decision procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .decomposition import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    TreeDecomposition,
    make_nice,
    square_augment,
    validate,
)
from .errors import ResourceLimitError
from .game import AshgInstance, DeviationWitness, Partition, SINGLETON

DEFAULT_TABLE_CAP = 1_000_000


@dataclass(frozen=True)
class Coloring:
    """A total assignment of colors 1..k to vertices 1..n."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        for v, c in enumerate(self.colors, start=1):
            if not (1 <= c <= self.k):
                raise ValueError(f"vertex {v} has color {c} outside 1..{self.k}")


def choose_k(max_bag_size: int, max_degree: int) -> int:
    """Color budget max(1, max_bag_size * max_degree) for the equivalence."""
    if max_bag_size < 1:
        raise ValueError(f"max_bag_size must be >= 1, got {max_bag_size}")
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    return max(1, max_bag_size * max_degree)


def is_stable_coloring(
    instance: AshgInstance, coloring: Coloring
) -> tuple[bool, DeviationWitness | None]:
    """Check the stability condition for every vertex.

    The witness target is a color class id, or SINGLETON when the vertex
    fails against the empty class (own utility negative).
    """
    if len(coloring.colors) != instance.n:
        raise ValueError(
            f"coloring assigns {len(coloring.colors)} vertices, instance has {instance.n}"
        )
    colors = coloring.colors
    for v in range(1, instance.n + 1):
        row = instance.out[v]
        if not row:
            continue
        sums: dict[int, int] = {}
        for u, w in row:
            c = colors[u - 1]
            sums[c] = sums.get(c, 0) + w
        own = sums.get(colors[v - 1], 0)
        if own < 0:
            return False, DeviationWitness(v, own, SINGLETON, 0)
        for c in sorted(sums):
            if c != colors[v - 1] and sums[c] > own:
                return False, DeviationWitness(v, own, c, sums[c])
    return True, None


def coloring_to_partition(coloring: Coloring) -> Partition:
    """Nonempty color classes as coalitions (ids renormalized)."""
    return Partition(coloring.colors)


def _canon(labels) -> tuple[int, ...]:
    """Relabel block ids to first-occurrence order 0,1,2,..."""
    seen: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


def solve_nash_via_coloring(
    instance: AshgInstance,
    td: TreeDecomposition,
    table_cap: int = DEFAULT_TABLE_CAP,
    stats: dict | None = None,
) -> Partition | None:
    """Decide Nash stability by dynamic programming over bag colorings.

    The input decomposition is squared and widened (square_augment), so
    every closed neighborhood of the original graph appears inside some
    bag of the nice form.  A signature records how the current bag is
    split into color classes, in canonical first-occurrence order with
    at most k classes; color names never matter because the stability
    test only compares sums within and across classes.  INTRODUCE
    branches over the existing classes plus one fresh class and
    immediately applies the stability test of every bag vertex whose
    closed neighborhood just became fully visible; FORGET projects,
    JOIN intersects.  k is max_bag_size(td) * max_degree, capped at n
    (a stable coloring never needs more than n colors).

    Returns a Nash Stable partition or None; raises ResourceLimitError
    when a signature table would exceed table_cap.
    """
    ok, violations = validate(td, instance)
    if not ok:
        raise ValueError("invalid decomposition: " + "; ".join(violations))

    n = instance.n
    k = min(choose_k(max(1, td.max_bag_size), instance.max_degree), max(1, n))
    sq_instance, sq_td = square_augment(instance, td)
    ntd = make_nice(sq_td)

    closed = [frozenset()] * (n + 1)
    for v in range(1, n + 1):
        closed[v] = frozenset(instance.neighbors[v]) | {v}

    nodes = ntd.nodes
    tables: list[set[tuple[int, ...]] | None] = [None] * len(nodes)
    forget_back: dict[int, dict[tuple[int, ...], tuple[int, ...]]] = {}
    peak = 0

    for idx, nd in enumerate(nodes):
        bag = nd.bag
        if nd.kind == LEAF:
            table = {()}
        elif nd.kind == INTRODUCE:
            child = tables[nd.children[0]]
            v = nd.vertex
            p = bag.index(v)
            # checks that can newly pass here: u with v in N[u] and N[u] in bag
            bag_set = set(bag)
            pos = {u: i for i, u in enumerate(bag)}
            checks = []
            for u in bag:
                if (u == v or v in closed[u]) and closed[u] <= bag_set:
                    arcs = [(pos[t], w) for t, w in instance.out[u] if t in bag_set]
                    checks.append((pos[u], arcs))
            table = set()
            for sig in child:
                blocks = (max(sig) + 1) if sig else 0
                for color in range(min(blocks + 1, k)):
                    cand = sig[:p] + (color,) + sig[p:]
                    ok_sig = True
                    for pu, arcs in checks:
                        cu = cand[pu]
                        sums: dict[int, int] = {}
                        for pt, w in arcs:
                            c = cand[pt]
                            sums[c] = sums.get(c, 0) + w
                        own = sums.get(cu, 0)
                        if own < 0:
                            ok_sig = False
                            break
                        for s in sums.values():
                            if s > own:
                                ok_sig = False
                                break
                        if not ok_sig:
                            break
                    if ok_sig:
                        table.add(_canon(cand))
                        if len(table) > table_cap:
                            raise ResourceLimitError(
                                f"signature table at introduce of {v} "
                                f"exceeds cap {table_cap}"
                            )
        elif nd.kind == FORGET:
            child = tables[nd.children[0]]
            child_bag = nodes[nd.children[0]].bag
            p = child_bag.index(nd.vertex)
            back: dict[tuple[int, ...], tuple[int, ...]] = {}
            for sig in sorted(child):
                proj = _canon(sig[:p] + sig[p + 1 :])
                if proj not in back:
                    back[proj] = sig
            forget_back[idx] = back
            table = set(back)
        else:  # JOIN
            left = tables[nd.children[0]]
            right = tables[nd.children[1]]
            table = left & right
        if len(table) > table_cap:
            raise ResourceLimitError(
                f"signature table at node {idx} has {len(table)} entries (cap {table_cap})"
            )
        peak = max(peak, len(table))
        tables[idx] = table
        for c in nd.children:
            tables[c] = None  # free early; forget_back keeps what traceback needs

    if stats is not None:
        stats["k"] = k
        stats["peak_table"] = peak
        stats["nice_nodes"] = len(nodes)

    root_table = tables[ntd.root]
    if not root_table:
        return None
    if n == 0:
        return Partition([])

    # Top-down walk: class_ids maps a signature's block labels to global
    # coalition ids; a vertex is committed where it is forgotten.
    assign = [0] * (n + 1)
    fresh = 0
    stack: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = [(ntd.root, (), ())]
    while stack:
        idx, sig, class_ids = stack.pop()
        nd = nodes[idx]
        if nd.kind == LEAF:
            continue
        if nd.kind == INTRODUCE:
            p = nd.bag.index(nd.vertex)
            rest = sig[:p] + sig[p + 1 :]
            relabel: dict[int, int] = {}
            for lab in rest:
                if lab not in relabel:
                    relabel[lab] = len(relabel)
            child_ids = [0] * len(relabel)
            for old, new in relabel.items():
                child_ids[new] = class_ids[old]
            stack.append((nd.children[0], _canon(rest), tuple(child_ids)))
        elif nd.kind == FORGET:
            child_sig = forget_back[idx][sig]
            child_bag = nodes[nd.children[0]].bag
            p = child_bag.index(nd.vertex)
            rest = child_sig[:p] + child_sig[p + 1 :]
            relabel = {}
            for lab in rest:
                if lab not in relabel:
                    relabel[lab] = len(relabel)
            blocks = (max(child_sig) + 1) if child_sig else 0
            child_ids = [0] * blocks
            for old, new in relabel.items():
                child_ids[old] = class_ids[new]
            lab_v = child_sig[p]
            if lab_v not in relabel:  # v's class has no other bag member
                fresh += 1
                child_ids[lab_v] = n + fresh
            assign[nd.vertex] = child_ids[lab_v]
            stack.append((nd.children[0], child_sig, tuple(child_ids)))
        else:  # JOIN: both children hold this exact signature
            stack.append((nd.children[0], sig, class_ids))
            stack.append((nd.children[1], sig, class_ids))

    return Partition(assign[1:])
