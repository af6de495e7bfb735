"""Shared samplers and deliberately-naive oracles for cross-validation.

The naive functions here re-derive answers with the dumbest method that
can work (full products, quadratic scans) so the package's own oracles
and solvers can be checked against something with no shared code.
"""

from __future__ import annotations

import itertools

from ashg import AshgInstance, CnfFormula, Partition


def uniform_instance(rng, n_max=8, max_degree=4, w_lo=-3, w_hi=3):
    """Sparse digraph with uniform weights and a hard degree cap."""
    n = rng.randint(2, n_max)
    arcs = {}
    deg = [0] * (n + 1)
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    rng.shuffle(pairs)
    for u, v in pairs:
        if deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        if rng.random() < 0.55:
            deg[u] += 1
            deg[v] += 1
            mode = rng.random()
            if mode < 0.45:
                arcs[(u, v)] = rng.randint(w_lo, w_hi)
            elif mode < 0.9:
                arcs[(v, u)] = rng.randint(w_lo, w_hi)
            else:
                arcs[(u, v)] = rng.randint(w_lo, w_hi)
                arcs[(v, u)] = rng.randint(w_lo, w_hi)
    return AshgInstance(n, arcs)


def frustrated_instance(rng, n_max=8, max_degree=4):
    """Chase-heavy digraph (u wants v, v repelled) that is often unstable."""
    n = rng.randint(2, n_max)
    arcs = {}
    deg = [0] * (n + 1)
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    rng.shuffle(pairs)
    for u, v in pairs:
        if deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        if rng.random() < 0.7:
            deg[u] += 1
            deg[v] += 1
            if rng.random() < 0.5:
                u, v = v, u
            r = rng.random()
            if r < 0.6:
                arcs[(u, v)] = rng.randint(1, 3)
                arcs[(v, u)] = -rng.randint(1, 3)
            elif r < 0.8:
                arcs[(u, v)] = rng.randint(1, 3)
            else:
                arcs[(u, v)] = rng.randint(-3, 3) or 1
    return AshgInstance(n, arcs)


def suite_instance(rng, index, n_max=8):
    """Alternating mix; the frustrated half keeps the NONE rate high."""
    if index % 2 == 0:
        return frustrated_instance(rng, n_max)
    return uniform_instance(rng, n_max)


def path_instance(n, rng=None, w_lo=-5, w_hi=5):
    """Path 1-2-...-n with symmetric weights (unit without an rng)."""
    arcs = {}
    for v in range(1, n):
        w = 1 if rng is None else rng.randint(w_lo, w_hi)
        arcs[(v, v + 1)] = w
        arcs[(v + 1, v)] = w
    return AshgInstance(n, arcs)


# ---------------------------------------------------------------------------
# naive oracles


def naive_is_stable(instance, partition):
    """Quadratic stability scan, written independently of the package."""
    for v in range(1, instance.n + 1):
        mine = partition.class_of(v)
        own = sum(
            instance.weight(v, u) for u in partition.members(mine) if u != v
        )
        if own < 0:
            return False
        for cid in range(1, partition.num_classes + 1):
            if cid == mine:
                continue
            toward = sum(instance.weight(v, u) for u in partition.members(cid))
            if toward > own:
                return False
    return True


def naive_stable_exists(instance):
    """Label-product search over all n^n assignments; only for tiny n."""
    n = instance.n
    if n == 0:
        return True
    for labels in itertools.product(range(n), repeat=n):
        if naive_is_stable(instance, Partition(labels)):
            return True
    return False


def all_partitions(elements):
    """Every set partition of a list, by recursive first-element placement."""
    elements = list(elements)
    if not elements:
        yield []
        return
    head, rest = elements[0], elements[1:]
    for sub in all_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [sub[i] + [head]] + sub[i + 1 :]
        yield sub + [[head]]


def bell_numbers(limit):
    """Bell numbers B(0..limit) via the Bell triangle."""
    out = [1]
    row = [1]
    for _ in range(limit):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        out.append(nxt[0])
        row = nxt
    return out


def three_partition_feasible(items, target):
    """Can the items be split into triples each summing to target?"""
    items = list(items)
    if not items:
        return True
    first = items[0]
    rest = items[1:]
    for i, j in itertools.combinations(range(len(rest)), 2):
        if first + rest[i] + rest[j] == target:
            remaining = [x for t, x in enumerate(rest) if t not in (i, j)]
            if three_partition_feasible(remaining, target):
                return True
    return False


def bin_packing_feasible(items, capacity, bins):
    """Full product search over bin assignments."""
    for assign in itertools.product(range(bins), repeat=len(items)):
        loads = [0] * bins
        for x, b in zip(items, assign):
            loads[b] += x
        if all(load <= capacity for load in loads):
            return True
    return False


# ---------------------------------------------------------------------------
# CNF helpers


def satisfying_assignments(phi):
    for bits in itertools.product([False, True], repeat=phi.num_vars):
        if phi.is_satisfied_by(bits):
            yield bits


def random_cnf(rng, max_vars=4, max_clauses=3):
    num_vars = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        size = rng.randint(1, 3)
        lits = []
        for _ in range(size):
            var = rng.randint(1, num_vars)
            lits.append(var if rng.random() < 0.5 else -var)
        clauses.append(lits)
    return CnfFormula.from_clauses(num_vars, clauses)


def random_satisfiable_cnf(rng, max_vars=4, max_clauses=3):
    """Rejection-sample until some assignment satisfies the formula."""
    while True:
        phi = random_cnf(rng, max_vars, max_clauses)
        sats = list(satisfying_assignments(phi))
        if sats:
            return phi, sats
