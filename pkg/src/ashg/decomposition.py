"""Tree decompositions: validation, elimination heuristics, nice form, squaring.

A decomposition is a tree of bags satisfying the usual three axioms:
every vertex is in some bag, every underlying edge is inside some bag,
and the bags holding any fixed vertex form a connected subtree.  Width
is max bag size minus one, floored at 0 for the degenerate empty case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .game import AshgInstance

MIN_DEGREE = "min-degree"
MIN_FILL = "min-fill"


class TreeDecomposition:
    """Bags keyed by integer node id plus undirected tree edges."""

    __slots__ = ("bags", "edges", "_adj")

    def __init__(
        self,
        bags: Mapping[int, Iterable[int]],
        edges: Iterable[tuple[int, int]] = (),
    ):
        bag_map = {int(i): frozenset(b) for i, b in bags.items()}
        edge_list = []
        for a, b in edges:
            if a not in bag_map or b not in bag_map:
                raise ValueError(f"tree edge ({a},{b}) references a missing bag")
            if a == b:
                raise ValueError(f"tree edge ({a},{b}) is a self-loop")
            edge_list.append((a, b) if a < b else (b, a))
        if len(set(edge_list)) != len(edge_list):
            raise ValueError("duplicate tree edge")
        adj: dict[int, list[int]] = {i: [] for i in bag_map}
        for a, b in edge_list:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "bags", bag_map)
        object.__setattr__(self, "edges", tuple(sorted(edge_list)))
        object.__setattr__(self, "_adj", {i: tuple(sorted(v)) for i, v in adj.items()})

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("TreeDecomposition is immutable")

    @property
    def max_bag_size(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0)

    @property
    def width(self) -> int:
        return max(0, self.max_bag_size - 1)

    def neighbors_of(self, node: int) -> tuple[int, ...]:
        return self._adj[node]

    def __repr__(self) -> str:
        return f"TreeDecomposition(bags={len(self.bags)}, width={self.width})"


def validate(td: TreeDecomposition, instance: AshgInstance) -> tuple[bool, list[str]]:
    """Check the three decomposition axioms plus tree shape.

    Returns (ok, violations); violations are human-readable strings and
    the list is empty iff ok.
    """
    violations: list[str] = []
    ids = sorted(td.bags)
    if not ids:
        violations.append("decomposition has no bags")
        return False, violations

    for i in ids:
        for v in td.bags[i]:
            if not (1 <= v <= instance.n):
                violations.append(f"bag {i} contains unknown vertex {v}")

    # tree shape: connected and acyclic
    if len(td.edges) != len(ids) - 1:
        violations.append(
            f"{len(td.edges)} tree edges for {len(ids)} bags (a tree needs {len(ids) - 1})"
        )
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        x = stack.pop()
        for y in td.neighbors_of(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(ids):
        violations.append("tree is not connected")

    covered: set[int] = set()
    for b in td.bags.values():
        covered |= b
    for v in range(1, instance.n + 1):
        if v not in covered:
            violations.append(f"vertex {v} is in no bag")

    for u, v in sorted(instance.underlying_edges()):
        if not any(u in b and v in b for b in td.bags.values()):
            violations.append(f"edge {{{u},{v}}} is in no bag")

    # connected subtree per vertex (only meaningful if the tree itself is ok)
    if len(seen) == len(ids) and len(td.edges) == len(ids) - 1:
        for v in range(1, instance.n + 1):
            holding = [i for i in ids if v in td.bags[i]]
            if not holding:
                continue
            reach = {holding[0]}
            stack = [holding[0]]
            hold_set = set(holding)
            while stack:
                x = stack.pop()
                for y in td.neighbors_of(x):
                    if y in hold_set and y not in reach:
                        reach.add(y)
                        stack.append(y)
            if len(reach) != len(holding):
                violations.append(f"bags holding vertex {v} are not connected in the tree")

    return not violations, violations


def heuristic_decompose(instance: AshgInstance, strategy: str = MIN_DEGREE) -> TreeDecomposition:
    """Elimination-ordering decomposition, deterministic for a fixed input.

    MIN_DEGREE picks the vertex with fewest remaining neighbors, MIN_FILL
    the vertex whose elimination adds the fewest fill edges; both break
    ties toward the lowest vertex id.  Bags are the closed neighborhoods
    at elimination time; each bag hangs off the bag of its earliest
    later-eliminated neighbor.
    """
    if strategy not in (MIN_DEGREE, MIN_FILL):
        raise ValueError(f"unknown strategy {strategy!r}")
    n = instance.n
    if n == 0:
        return TreeDecomposition({1: frozenset()})

    adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for u, v in instance.underlying_edges():
        adj[u].add(v)
        adj[v].add(u)

    def fill_count(v: int) -> int:
        nbrs = sorted(adj[v])
        return sum(
            1
            for i, a in enumerate(nbrs)
            for b in nbrs[i + 1 :]
            if b not in adj[a]
        )

    order: list[int] = []
    bags: list[frozenset[int]] = []
    remaining = set(adj)
    while remaining:
        if strategy == MIN_DEGREE:
            v = min(remaining, key=lambda x: (len(adj[x]), x))
        else:
            v = min(remaining, key=lambda x: (fill_count(x), x))
        nbrs = sorted(adj[v])
        bags.append(frozenset([v] + nbrs))
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nbrs:
            adj[a].discard(v)
        del adj[v]
        remaining.discard(v)
        order.append(v)

    pos = {v: i for i, v in enumerate(order)}
    bag_ids = {i: i + 1 for i in range(n)}
    edges = []
    for i in range(n - 1):
        later = [pos[u] for u in bags[i] if pos[u] > i]
        parent = min(later) if later else i + 1
        edges.append((bag_ids[i], bag_ids[parent]))
    return TreeDecomposition({bag_ids[i]: bags[i] for i in range(n)}, edges)


LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]
    vertex: int | None
    children: tuple[int, ...]


class NiceTreeDecomposition:
    """Rooted binary nice form: leaf/introduce/forget/join nodes.

    Nodes are stored children-before-parents, so iterating by index is a
    valid bottom-up order; the root is the last node and has an empty
    bag, as do all leaves.
    """

    __slots__ = ("nodes", "root", "_below")

    def __init__(self, nodes: list[NiceNode]):
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "root", len(nodes) - 1)
        object.__setattr__(self, "_below", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("NiceTreeDecomposition is immutable")

    @property
    def max_bag_size(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0)

    @property
    def width(self) -> int:
        return max(0, self.max_bag_size - 1)

    def vertices_below(self, node_id: int) -> frozenset[int]:
        """Union of bags in the subtree rooted at node_id (inclusive)."""
        cached = self._below
        if cached is None:
            cached = []
            for nd in self.nodes:
                acc = set(nd.bag)
                for c in nd.children:
                    acc |= cached[c]
                cached.append(frozenset(acc))
            object.__setattr__(self, "_below", tuple(cached))
        return self._below[node_id]

    def __repr__(self) -> str:
        return f"NiceTreeDecomposition(nodes={len(self.nodes)}, width={self.width})"


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert a decomposition to nice form without increasing the width.

    The lowest bag id is taken as the root; between a bag and its parent
    the out-of-parent vertices are forgotten in ascending order and the
    new ones introduced in ascending order, leaves grow from an empty
    LEAF, and multiple children fold left-to-right through JOIN nodes.
    The final root forgets the root bag down to empty.
    """
    ids = sorted(td.bags)
    if not ids:
        raise ValueError("decomposition has no bags")
    root = ids[0]

    parent: dict[int, int | None] = {root: None}
    bfs = [root]
    for x in bfs:
        for y in td.neighbors_of(x):
            if y not in parent:
                parent[y] = x
                bfs.append(y)
    if len(parent) != len(ids):
        raise ValueError("decomposition tree is not connected")
    children: dict[int, list[int]] = {i: [] for i in ids}
    for y, p in parent.items():
        if p is not None:
            children[p].append(y)
    for i in ids:
        children[i].sort()

    nodes: list[NiceNode] = []

    def emit(kind: str, bag: tuple[int, ...], vertex: int | None, kids: tuple[int, ...]) -> int:
        nodes.append(NiceNode(kind, bag, vertex, kids))
        return len(nodes) - 1

    def chain_to(bag_from: frozenset[int], bag_to: frozenset[int], top: int) -> int:
        cur = set(bag_from)
        for v in sorted(bag_from - bag_to):
            cur.discard(v)
            top = emit(FORGET, tuple(sorted(cur)), v, (top,))
        for v in sorted(bag_to - bag_from):
            cur.add(v)
            top = emit(INTRODUCE, tuple(sorted(cur)), v, (top,))
        return top

    top_of: dict[int, int] = {}
    for b in reversed(bfs):  # children before parents
        bag = td.bags[b]
        pieces = []
        for c in children[b]:
            pieces.append(chain_to(td.bags[c], bag, top_of[c]))
        if not pieces:
            top = emit(LEAF, (), None, ())
            cur: set[int] = set()
            for v in sorted(bag):
                cur.add(v)
                top = emit(INTRODUCE, tuple(sorted(cur)), v, (top,))
            pieces.append(top)
        acc = pieces[0]
        for nxt in pieces[1:]:
            acc = emit(JOIN, tuple(sorted(bag)), None, (acc, nxt))
        top_of[b] = acc

    chain_to(td.bags[root], frozenset(), top_of[root])
    return NiceTreeDecomposition(nodes)


def validate_nice(ntd: NiceTreeDecomposition, instance: AshgInstance) -> tuple[bool, list[str]]:
    """Check nice-form structure plus the decomposition axioms.

    Structure: leaves and the root have empty bags, INTRODUCE adds its
    vertex to the child bag, FORGET removes it, JOIN has two children
    with bags equal to its own.
    """
    violations: list[str] = []
    nodes = ntd.nodes
    if not nodes:
        return False, ["nice decomposition has no nodes"]
    for i, nd in enumerate(nodes):
        if tuple(sorted(nd.bag)) != nd.bag:
            violations.append(f"node {i}: bag not sorted")
        if nd.kind == LEAF:
            if nd.bag or nd.children:
                violations.append(f"node {i}: leaf must have empty bag and no children")
        elif nd.kind == INTRODUCE:
            if len(nd.children) != 1:
                violations.append(f"node {i}: introduce needs one child")
            else:
                child = nodes[nd.children[0]]
                if nd.vertex in child.bag or set(nd.bag) != set(child.bag) | {nd.vertex}:
                    violations.append(f"node {i}: introduce of {nd.vertex} inconsistent")
        elif nd.kind == FORGET:
            if len(nd.children) != 1:
                violations.append(f"node {i}: forget needs one child")
            else:
                child = nodes[nd.children[0]]
                if nd.vertex not in child.bag or set(nd.bag) != set(child.bag) - {nd.vertex}:
                    violations.append(f"node {i}: forget of {nd.vertex} inconsistent")
        elif nd.kind == JOIN:
            if len(nd.children) != 2:
                violations.append(f"node {i}: join needs two children")
            elif any(nodes[c].bag != nd.bag for c in nd.children):
                violations.append(f"node {i}: join children bags differ")
        else:
            violations.append(f"node {i}: unknown kind {nd.kind!r}")
        for c in nd.children:
            if not (0 <= c < i):
                violations.append(f"node {i}: child {c} does not precede it")
    if nodes[ntd.root].bag:
        violations.append("root bag is not empty")
    if violations:
        return False, violations

    as_td = TreeDecomposition(
        {i: nd.bag for i, nd in enumerate(nodes)},
        [(i, c) for i, nd in enumerate(nodes) for c in nd.children],
    )
    ok, axiom_violations = validate(as_td, instance)
    return ok, axiom_violations


def _distance_two_pairs(instance: AshgInstance) -> set[tuple[int, int]]:
    """Unordered pairs at distance exactly 2 in the underlying graph."""
    pairs: set[tuple[int, int]] = set()
    nbrs = instance.neighbors
    for y in range(1, instance.n + 1):
        row = nbrs[y]
        for i, u in enumerate(row):
            u_nbrs = set(nbrs[u])
            for x in row[i + 1 :]:
                if x not in u_nbrs:
                    pairs.add((u, x))
    return pairs


def square_instance(instance: AshgInstance) -> AshgInstance:
    """The square G^2: add zero-weight arc pairs between distance-2 vertices.

    Utilities are unchanged for every partition, but coalitions that are
    connected in G^2 may be split along distance >= 3 gaps, which is what
    ties plain Nash stability on G to connected stability on G^2.
    """
    arcs = dict(instance.arcs)
    for u, x in _distance_two_pairs(instance):
        arcs[(u, x)] = 0
        arcs[(x, u)] = 0
    return AshgInstance(instance.n, arcs)


def square_augment(
    instance: AshgInstance, td: TreeDecomposition
) -> tuple[AshgInstance, TreeDecomposition]:
    """Square the instance and widen each bag to its closed neighborhood.

    The returned decomposition has the same tree and bags B ∪ N(B); it is
    valid for the squared instance, and each new bag has at most
    |B| * (max_degree + 1) vertices.
    """
    ok, violations = validate(td, instance)
    if not ok:
        raise ValueError("invalid decomposition: " + "; ".join(violations))
    sq = square_instance(instance)
    nbrs = instance.neighbors
    new_bags = {}
    for i, bag in td.bags.items():
        widened = set(bag)
        for v in bag:
            widened.update(nbrs[v])
        new_bags[i] = frozenset(widened)
    return sq, TreeDecomposition(new_bags, td.edges)
