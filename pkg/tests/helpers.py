"""Brute-force oracles and small fixtures shared by the tests.

Everything here is deliberately naive: exhaustive enumeration over node
subsets or simple paths, usable only on tiny graphs.
"""

from __future__ import annotations

import random
from itertools import combinations

from brbsim.topology import Graph

# Figure-1 style cube: u=0, a=1, b=2, c=3, d=4, e=5, f=6, v=7 (Q3 bit labels
# 000, 001, 010, 100, 011, 101, 110, 111).
U, A, B, C, D, E, F, V = range(8)
CUBE = Graph.from_edges(
    8,
    [(U, A), (U, B), (U, C), (A, D), (A, E), (B, D), (B, F), (C, E), (C, F), (D, V), (E, V), (F, V)],
    family="cube",
)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2), family="complete")


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    """Random spanning tree plus independent extra edges."""
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a, b in combinations(range(n), 2):
        if rng.random() < p:
            edges.add((a, b))
    return Graph.from_edges(n, edges)


def connected_without(g: Graph, removed: set[int]) -> bool:
    alive = [u for u in range(g.n) if u not in removed]
    if len(alive) <= 1:
        return True
    seen = {alive[0]}
    stack = [alive[0]]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(alive)


def brute_vertex_connectivity(g: Graph) -> int:
    """Smallest node set whose removal disconnects g; n-1 for complete graphs."""
    if not connected_without(g, set()):
        return 0
    for size in range(g.n - 1):
        for cut in combinations(range(g.n), size):
            if not connected_without(g, set(cut)):
                return size
    return g.n - 1


def simple_paths(g: Graph, u: int, v: int) -> list[tuple[int, ...]]:
    out = []

    def walk(path: list[int]) -> None:
        for w in g.neighbors(path[-1]):
            if w == v:
                out.append(tuple(path[1:]))
            elif w not in path:
                path.append(w)
                walk(path)
                path.pop()

    walk([u])
    return out


def brute_max_disjoint_paths(g: Graph, u: int, v: int) -> int:
    """Maximum number of internally disjoint u-v paths by exhaustive packing."""
    interiors = sorted({frozenset(p) for p in simple_paths(g, u, v)}, key=len)
    best = 0

    def pack(i: int, used: frozenset, count: int) -> None:
        nonlocal best
        best = max(best, count)
        if count + len(interiors) - i <= best:
            return
        for j in range(i, len(interiors)):
            if not interiors[j] & used:
                pack(j + 1, used | interiors[j], count + 1)

    pack(0, frozenset(), 0)
    return best


def count_simple_paths_from(g: Graph, s: int) -> int:
    """Directed simple paths of length >= 1 starting at s."""

    def walk(u: int, seen: set[int]) -> int:
        total = 0
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                total += 1 + walk(w, seen)
                seen.remove(w)
        return total

    return walk(s, {s})


def brute_min_hitting_set(sets: list[frozenset[int]]) -> int:
    universe = sorted(set().union(*sets)) if sets else []
    for size in range(len(universe) + 1):
        for cand in combinations(universe, size):
            if all(s & set(cand) for s in sets):
                return size
    raise ValueError("unhittable collection")


def brute_max_packing(records: list[frozenset[int]]) -> int:
    best = 0
    for mask in range(1 << len(records)):
        chosen = [records[i] for i in range(len(records)) if mask >> i & 1]
        if all(not (a & b) for a, b in combinations(chosen, 2)):
            best = max(best, len(chosen))
    return best


def random_label_sets(rng: random.Random, max_sets: int = 12, max_labels: int = 10) -> list[frozenset[int]]:
    labels = rng.randint(1, max_labels)
    out = []
    for _ in range(rng.randint(1, max_sets)):
        size = rng.randint(1, min(4, labels))
        out.append(frozenset(rng.sample(range(labels), size)))
    return out
