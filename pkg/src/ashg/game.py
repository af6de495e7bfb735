"""Game model: weighted digraph instances, partitions, stability verifiers.

Vertices are the dense range 1..n.  Arcs are ordered pairs with integer
weights; zero-weight arcs are legal and are kept, because they contribute
edges to the underlying undirected graph and therefore matter for degree
bounds and connectivity even though they never change a utility sum.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

# Constructor guard: utility sums stay below this with room for 4x slack.
_MAX_REPRESENTABLE = sys.maxsize


class AshgInstance:
    """An additively separable hedonic game on vertices 1..n.

    `arcs` may be a mapping (u, v) -> weight or an iterable of
    (u, v, weight) triples.  Duplicate ordered pairs and self-loops are
    rejected.  Instances are treated as immutable after construction.
    """

    __slots__ = ("n", "arcs", "out", "neighbors", "max_degree", "max_abs_weight")

    def __init__(self, n: int, arcs: Mapping[tuple[int, int], int] | Iterable[tuple[int, int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        if isinstance(arcs, Mapping):
            items = [(u, v, w) for (u, v), w in arcs.items()]
        else:
            items = [(u, v, w) for (u, v, w) in arcs]
        arc_map: dict[tuple[int, int], int] = {}
        for u, v, w in items:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"arc ({u},{v}) leaves the vertex range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not isinstance(w, int):
                raise ValueError(f"arc ({u},{v}) has non-integer weight {w!r}")
            if (u, v) in arc_map:
                raise ValueError(f"duplicate arc ({u},{v})")
            arc_map[(u, v)] = w

        w_max = max((abs(w) for w in arc_map.values()), default=0)
        if n * w_max > _MAX_REPRESENTABLE // 4:
            raise ValueError(
                f"n*W = {n * w_max} exceeds the arithmetic guard {_MAX_REPRESENTABLE // 4}"
            )

        out: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
        nbr: list[set[int]] = [set() for _ in range(n + 1)]
        for (u, v), w in arc_map.items():
            out[u].append((v, w))
            nbr[u].add(v)
            nbr[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", arc_map)
        object.__setattr__(self, "out", tuple(tuple(sorted(row)) for row in out))
        object.__setattr__(self, "neighbors", tuple(tuple(sorted(s)) for s in nbr))
        object.__setattr__(self, "max_degree", max((len(s) for s in nbr[1:]), default=0))
        object.__setattr__(self, "max_abs_weight", w_max)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("AshgInstance is immutable")

    def weight(self, u: int, v: int) -> int:
        """Weight of arc (u, v), or 0 when the arc is absent."""
        return self.arcs.get((u, v), 0)

    def underlying_edges(self) -> set[tuple[int, int]]:
        """Undirected edges as (min, max) pairs; zero-weight arcs included."""
        return {(u, v) if u < v else (v, u) for (u, v) in self.arcs}

    def arc_count(self) -> int:
        return len(self.arcs)

    def __repr__(self) -> str:
        return f"AshgInstance(n={self.n}, arcs={len(self.arcs)})"


class Partition:
    """A partition of the vertices 1..n into coalitions.

    Stored as a label per vertex, normalized so coalition ids are dense,
    1-based, and ordered by first appearance (restricted growth labeling).
    Two Partition objects are equal iff they have the same coalitions.
    """

    __slots__ = ("n", "labels", "_blocks")

    def __init__(self, labels: Sequence[int]):
        relabel: dict[int, int] = {}
        out = []
        for raw in labels:
            if raw not in relabel:
                relabel[raw] = len(relabel) + 1
            out.append(relabel[raw])
        object.__setattr__(self, "n", len(out))
        object.__setattr__(self, "labels", tuple(out))
        object.__setattr__(self, "_blocks", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Partition is immutable")

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(range(n))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        """Build from explicit coalitions; blocks must cover 1..n exactly once."""
        assign: dict[int, int] = {}
        for cid, block in enumerate(blocks):
            for v in block:
                if v in assign:
                    raise ValueError(f"vertex {v} appears in two coalitions")
                assign[v] = cid
        count = len(assign) if n is None else n
        missing = [v for v in range(1, count + 1) if v not in assign]
        extra = [v for v in assign if not (1 <= v <= count)]
        if missing or extra:
            raise ValueError(f"blocks do not cover 1..{count}: missing {missing}, extra {extra}")
        return cls([assign[v] for v in range(1, count + 1)])

    def class_of(self, v: int) -> int:
        if not (1 <= v <= self.n):
            raise ValueError(f"vertex {v} not in 1..{self.n}")
        return self.labels[v - 1]

    @property
    def num_classes(self) -> int:
        return max(self.labels, default=0)

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Coalitions in id order, members ascending."""
        cached = self._blocks
        if cached is None:
            groups: list[list[int]] = [[] for _ in range(self.num_classes)]
            for v, cid in enumerate(self.labels, start=1):
                groups[cid - 1].append(v)
            cached = tuple(tuple(g) for g in groups)
            object.__setattr__(self, "_blocks", cached)
        return cached

    def members(self, cid: int) -> tuple[int, ...]:
        if not (1 <= cid <= self.num_classes):
            raise ValueError(f"no coalition with id {cid}")
        return self.blocks()[cid - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"Partition({list(self.blocks())})"


#: Witness target marker for a deviation into a fresh singleton coalition.
SINGLETON = None


@dataclass(frozen=True)
class DeviationWitness:
    """A strictly improving move certifying instability.

    `target` is the id of an existing coalition (or color class), or
    SINGLETON (None) for a move into a fresh empty coalition.  The
    improvement is strict: target_utility > current_utility.
    """

    vertex: int
    current_utility: int
    target: int | None
    target_utility: int


def _check_partition(instance: AshgInstance, partition: Partition) -> None:
    if partition.n != instance.n:
        raise ValueError(
            f"partition covers {partition.n} vertices, instance has {instance.n}"
        )


def utility(instance: AshgInstance, partition: Partition, v: int) -> int:
    """Utility of v inside its own coalition: sum of w(v, u) over co-members."""
    _check_partition(instance, partition)
    cid = partition.class_of(v)
    labels = partition.labels
    return sum(w for u, w in instance.out[v] if labels[u - 1] == cid)


def utility_toward(instance: AshgInstance, v: int, coalition: Iterable[int]) -> int:
    """Utility v would get as a member of the given vertex set (v excluded)."""
    if not (1 <= v <= instance.n):
        raise ValueError(f"vertex {v} not in 1..{instance.n}")
    members = set(coalition)
    for u in members:
        if not (1 <= u <= instance.n):
            raise ValueError(f"coalition member {u} not in 1..{instance.n}")
    return sum(w for u, w in instance.out[v] if u in members and u != v)


def _first_violation(
    instance: AshgInstance, labels: Sequence[int]
) -> tuple[int, int, int | None, int] | None:
    """First vertex (ascending) with an improving deviation, or None.

    Returns (vertex, own_utility, target_class_or_None, target_utility).
    Only coalitions holding an out-neighbor can beat a nonnegative own
    utility, so the scan per vertex is over out-arcs only.
    """
    out = instance.out
    for v in range(1, instance.n + 1):
        row = out[v]
        if not row:
            continue
        cid = labels[v - 1]
        sums: dict[int, int] = {}
        for u, w in row:
            c = labels[u - 1]
            sums[c] = sums.get(c, 0) + w
        own = sums.get(cid, 0)
        if own < 0:
            return (v, own, SINGLETON, 0)
        best_c = None
        best = own
        for c in sorted(sums):
            if c != cid and sums[c] > best:
                best = sums[c]
                best_c = c
        if best_c is not None:
            return (v, own, best_c, best)
    return None


def is_nash_stable(
    instance: AshgInstance, partition: Partition
) -> tuple[bool, DeviationWitness | None]:
    """Check Nash stability; on failure return the first improving deviation.

    Deterministic: vertices are scanned in ascending order and the best
    improving target is reported, ties broken by lowest coalition id.
    A negative own utility is reported as a move to SINGLETON.
    """
    _check_partition(instance, partition)
    hit = _first_violation(instance, partition.labels)
    if hit is None:
        return True, None
    v, own, target, gain = hit
    return False, DeviationWitness(v, own, target, gain)


def _connected_block(neighbors: Sequence[Sequence[int]], block: Sequence[int]) -> bool:
    if len(block) <= 1:
        return True
    members = set(block)
    seen = {block[0]}
    stack = [block[0]]
    while stack:
        x = stack.pop()
        for y in neighbors[x]:
            if y in members and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


def is_connected_partition(
    instance: AshgInstance, partition: Partition
) -> tuple[bool, int | None]:
    """Check that every coalition induces a connected underlying subgraph.

    Returns (ok, offending coalition id).  Singletons are connected; the
    underlying graph includes zero-weight arcs.
    """
    _check_partition(instance, partition)
    for cid, block in enumerate(partition.blocks(), start=1):
        if not _connected_block(instance.neighbors, block):
            return False, cid
    return True, None


def better_response_dynamics(
    instance: AshgInstance,
    max_steps: int = 1000,
    schedule: str = "best",
) -> Partition | None:
    """Run deviation dynamics from the all-singletons partition.

    One step applies one deviation: the lowest-id vertex with a strictly
    improving move deviates.  Under the "best" schedule it moves to the
    coalition with the highest payoff (ties to lowest coalition id, with
    an existing coalition preferred over a fresh singleton); under
    "first" it moves to the lowest-id improving coalition, trying the
    singleton move last.  Returns the partition once no vertex can
    improve, or None when max_steps deviations did not reach stability.
    Absence of a result is a normal outcome, not an error.
    """
    if schedule not in ("best", "first"):
        raise ValueError(f"unknown schedule {schedule!r}")
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    n = instance.n
    labels = list(range(1, n + 1))
    next_id = n + 1
    out = instance.out
    applied = 0
    while True:
        move: tuple[int, int | None] | None = None
        for v in range(1, n + 1):
            row = out[v]
            if not row:
                continue
            cid = labels[v - 1]
            sums: dict[int, int] = {}
            for u, w in row:
                c = labels[u - 1]
                sums[c] = sums.get(c, 0) + w
            own = sums.get(cid, 0)
            if schedule == "best":
                best_val, best_target = own, None
                for c in sorted(sums):
                    if c != cid and sums[c] > best_val:
                        best_val, best_target = sums[c], c
                if best_target is not None:
                    if own < 0 and best_val < 0:
                        move = (v, SINGLETON)  # the empty coalition pays 0
                    else:
                        move = (v, best_target)
                elif own < 0:
                    move = (v, SINGLETON)
            else:
                for c in sorted(sums):
                    if c != cid and sums[c] > own:
                        move = (v, c)
                        break
                if move is None and own < 0:
                    move = (v, SINGLETON)
            if move is not None:
                break
        if move is None:
            return Partition(labels)
        if applied >= max_steps:
            return None
        v, target = move
        if target is SINGLETON:
            labels[v - 1] = next_id
            next_id += 1
        else:
            labels[v - 1] = target
        applied += 1
