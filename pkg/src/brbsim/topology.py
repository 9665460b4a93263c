"""Graph families used by the experiments, plus vertex-connectivity queries.

Every generator returns an immutable :class:`Graph` whose ``k`` field holds
the vertex connectivity the family promises (or, for Barabasi-Albert graphs,
the measured one). Generators that promise ``k`` verify it before returning.
"""

from __future__ import annotations

import enum
import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import GenerationError, ParameterError

MAX_RESAMPLE = 1000


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``0 .. n-1``."""

    n: int
    edges: frozenset[tuple[int, int]]
    family: str = "custom"
    k: int | None = None
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.n)]
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ParameterError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge ({u}, {v}) outside [0, {self.n})")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in normalized:
                raise ParameterError(f"duplicate edge ({a}, {b})")
            normalized.add((a, b))
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "edges", frozenset(normalized))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(ns)) for ns in adj))

    @classmethod
    def from_edges(cls, n: int, edges, family: str = "custom", k: int | None = None) -> "Graph":
        return cls(n, frozenset((int(u), int(v)) for u, v in edges), family, k)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def bfs_distances(self, start: int) -> list[int]:
        dist = [-1] * self.n
        dist[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return min(self.bfs_distances(0)) >= 0

    def diameter(self) -> int:
        """Longest shortest path; raises on disconnected graphs."""
        best = 0
        for u in range(self.n):
            d = self.bfs_distances(u)
            if min(d) < 0:
                raise ParameterError("diameter of a disconnected graph")
            best = max(best, max(d))
        return best

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k if self.k is not None else -1} {self.family}"]
        lines += [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 3:
            raise ParameterError("graph dump must start with 'n k family'")
        n, k, family = int(rows[0][0]), int(rows[0][1]), rows[0][2]
        edges = [(int(a), int(b)) for a, b in rows[1:]]
        return cls.from_edges(n, edges, family, None if k < 0 else k)


class TopologyKind(str, enum.Enum):
    RANDOM_REGULAR = "random_regular"
    K_PASTED_TREE = "k_pasted_tree"
    K_DIAMOND = "k_diamond"
    MULTIPARTITE_WHEEL = "multipartite_wheel"
    GENERALIZED_WHEEL = "generalized_wheel"
    BARABASI_ALBERT = "barabasi_albert"


# --------------------------------------------------------------------------
# connectivity


def _disjoint_path_count(adjacency, u: int, v: int, limit: int | None = None) -> int:
    """Max number of internally vertex-disjoint u-v paths (u, v non-adjacent).

    Unit-capacity max-flow on the split graph: node x becomes 2x -> 2x+1.
    """
    n = len(adjacency)
    cap: dict[tuple[int, int], int] = {}
    nbrs: list[list[int]] = [[] for _ in range(2 * n)]

    def arc(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            cap[(a, b)] = 0
            if (b, a) not in cap:
                cap[(b, a)] = 0
            nbrs[a].append(b)
            nbrs[b].append(a)
        cap[(a, b)] += c

    for x in range(n):
        arc(2 * x, 2 * x + 1, n if x in (u, v) else 1)
    for a in range(n):
        for b in adjacency[a]:
            arc(2 * a + 1, 2 * b, 1)

    source, sink = 2 * u + 1, 2 * v
    flow = 0
    while limit is None or flow < limit:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b in nbrs[a]:
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            break
        b = sink
        while b != source:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1
    return flow


def pair_connectivity(g: Graph, u: int, v: int) -> int:
    """Size of a minimum u-v vertex cut; ``n - 1`` when u and v are adjacent."""
    if u == v:
        raise ParameterError("pair_connectivity needs two distinct nodes")
    if g.has_edge(u, v):
        return g.n - 1
    return _disjoint_path_count(g.adjacency, u, v)


def vertex_connectivity(g: Graph) -> int:
    if g.n <= 1 or not g.is_connected():
        return 0
    if len(g.edges) == g.n * (g.n - 1) // 2:
        return g.n - 1
    # Any minimum cut either misses the min-degree node v (then it separates v
    # from some non-neighbour) or contains it (then it separates two of v's
    # non-adjacent neighbours).
    v = min(range(g.n), key=lambda x: (g.degree(x), x))
    best = g.degree(v)
    adjacent = set(g.neighbors(v))
    for w in range(g.n):
        if w != v and w not in adjacent:
            best = min(best, _disjoint_path_count(g.adjacency, v, w, best))
    for x, y in combinations(g.neighbors(v), 2):
        if not g.has_edge(x, y):
            best = min(best, _disjoint_path_count(g.adjacency, x, y, best))
    return best


# --------------------------------------------------------------------------
# generators


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def _pairing_attempt(n: int, k: int, rng: random.Random) -> set[tuple[int, int]] | None:
    # Steger-Wormald: pair random stubs, put unsuitable pairs back, repeat.
    edges: set[tuple[int, int]] = set()
    stubs = list(range(n)) * k
    while stubs:
        leftover: dict[int, int] = defaultdict(int)
        rng.shuffle(stubs)
        it = iter(stubs)
        for a, b in zip(it, it):
            if a > b:
                a, b = b, a
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                leftover[a] += 1
                leftover[b] += 1
        if leftover and not any(
            (min(a, b), max(a, b)) not in edges for a, b in combinations(leftover, 2)
        ):
            return None
        stubs = [node for node, c in leftover.items() for _ in range(c)]
    return edges


def check_parameters(kind: TopologyKind | str, n: int, k: int) -> None:
    """Raise ``ParameterError`` if the family is undefined for (n, k)."""
    kind = TopologyKind(kind)
    if kind is TopologyKind.RANDOM_REGULAR:
        _require(k >= 3, "random regular graphs need k >= 3")
        _require(k < n, "random regular graphs need k < n")
        _require(n * k % 2 == 0, "n * k must be even")
    elif kind is TopologyKind.MULTIPARTITE_WHEEL:
        _require(k >= 2 and k % 2 == 0, "multipartite wheel needs an even k")
        _require(n % (k // 2) == 0, "k/2 must divide n")
        _require(n // (k // 2) >= 3, "multipartite wheel needs at least 3 groups")
    elif kind is TopologyKind.GENERALIZED_WHEEL:
        _require(k >= 3, "generalized wheel needs k >= 3")
        _require(n - (k - 2) >= 3, "generalized wheel needs a cycle of length >= 3")
    elif kind is TopologyKind.K_PASTED_TREE:
        _require(k >= 3, "k-pasted-tree needs k >= 3")
        _require(n >= k + 1, "k-pasted-tree needs n >= k + 1")
    elif kind is TopologyKind.K_DIAMOND:
        _require(k >= 3, "k-diamond needs k >= 3")
        _require(n >= 2 * k, "k-diamond needs n >= 2k")
    else:
        _require(1 <= k < n, "Barabasi-Albert needs 1 <= m < n")


def gen_random_regular(n: int, k: int, seed: int) -> Graph:
    check_parameters(TopologyKind.RANDOM_REGULAR, n, k)
    rng = random.Random(seed)
    for _ in range(MAX_RESAMPLE):
        edges = _pairing_attempt(n, k, rng)
        if edges is None:
            continue
        g = Graph.from_edges(n, edges, TopologyKind.RANDOM_REGULAR.value, k)
        if vertex_connectivity(g) == k:
            return g
    raise GenerationError(f"no {k}-connected {k}-regular graph on {n} nodes after {MAX_RESAMPLE} attempts")


def gen_multipartite_wheel(n: int, k: int) -> Graph:
    check_parameters(TopologyKind.MULTIPARTITE_WHEEL, n, k)
    size = k // 2
    groups = n // size
    edges = set()
    for gi in range(groups):
        nxt = (gi + 1) % groups
        for a in range(gi * size, gi * size + size):
            for b in range(nxt * size, nxt * size + size):
                edges.add((min(a, b), max(a, b)))
    return _checked(Graph.from_edges(n, edges, TopologyKind.MULTIPARTITE_WHEEL.value, k))


def gen_generalized_wheel(n: int, k: int) -> Graph:
    """Join of a (k-2)-clique hub (nodes 0..k-3) and a cycle on the rest."""
    check_parameters(TopologyKind.GENERALIZED_WHEEL, n, k)
    hubs = k - 2
    edges = set(combinations(range(hubs), 2))
    ring = list(range(hubs, n))
    for i, a in enumerate(ring):
        b = ring[(i + 1) % len(ring)]
        edges.add((min(a, b), max(a, b)))
        edges.update((h, a) for h in range(hubs))
    return _checked(Graph.from_edges(n, edges, TopologyKind.GENERALIZED_WHEEL.value, k))


def _grow_by_pinching(n: int, k: int, seed_n: int, seed_edges, rotate: int = 0) -> list[set[int]]:
    """Add nodes seed_n..n-1 one at a time.

    Each new node x removes floor(k/2) pairwise disjoint edges (a, b), taken
    oldest-first, and links to both endpoints of each; degrees of a and b are
    unchanged and x gets degree k (odd k adds one link to a least-loaded node).
    Oldest-first consumption makes the growth breadth-first, which keeps the
    diameter logarithmic.
    """
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b in seed_edges:
        adj[a].add(b)
        adj[b].add(a)
    queue = deque(sorted(seed_edges))
    queue.rotate(-rotate)
    half = k // 2
    for x in range(seed_n, n):
        chosen: list[tuple[int, int]] = []
        used: set[int] = set()
        deferred = []
        while len(chosen) < half and queue:
            a, b = queue.popleft()
            if b not in adj[a]:
                continue
            if a in used or b in used:
                deferred.append((a, b))
                continue
            chosen.append((a, b))
            used.update((a, b))
        queue.extendleft(reversed(deferred))
        if len(chosen) < half:
            raise GenerationError(f"ran out of disjoint edges while adding node {x}")
        for a, b in chosen:
            adj[a].discard(b)
            adj[b].discard(a)
            for e in (a, b):
                adj[e].add(x)
                adj[x].add(e)
                queue.append((e, x))
        if k % 2:
            w = min((y for y in range(x) if y not in used), key=lambda y: (len(adj[y]), y))
            adj[w].add(x)
            adj[x].add(w)
            queue.append((w, x))
    return adj


def _from_adj(adj: list[set[int]], family: str, k: int) -> Graph:
    edges = {(a, b) for a, ns in enumerate(adj) for b in ns if a < b}
    return Graph.from_edges(len(adj), edges, family, k)


def _pinched_family(n: int, k: int, seed_n: int, seed_edges, family: str) -> Graph:
    # Some small (n, k) pairs lose connectivity with the default edge order;
    # rotating the seed queue is a deterministic retry.
    for rotate in range(len(seed_edges)):
        try:
            adj = _grow_by_pinching(n, k, seed_n, seed_edges, rotate)
        except GenerationError:
            continue
        g = _from_adj(adj, family, k)
        if vertex_connectivity(g) == k:
            return g
    raise ParameterError(f"{family} construction undefined for n={n}, k={k}")


def _checked(g: Graph) -> Graph:
    if not g.is_connected() or vertex_connectivity(g) != g.k:
        raise GenerationError(f"{g.family}(n={g.n}, k={g.k}) is not {g.k}-connected")
    return g


@lru_cache(maxsize=64)
def gen_k_pasted_tree(n: int, k: int) -> Graph:
    """Logarithmic-diameter k-connected graph grown breadth-first from K_{k+1}."""
    check_parameters(TopologyKind.K_PASTED_TREE, n, k)
    seed = list(combinations(range(k + 1), 2))
    return _pinched_family(n, k, k + 1, seed, TopologyKind.K_PASTED_TREE.value)


@lru_cache(maxsize=64)
def gen_k_diamond(n: int, k: int) -> Graph:
    """Logarithmic-diameter k-connected graph grown breadth-first from K_{k,k}."""
    check_parameters(TopologyKind.K_DIAMOND, n, k)
    seed = [(a, b) for a in range(k) for b in range(k, 2 * k)]
    return _pinched_family(n, k, 2 * k, seed, TopologyKind.K_DIAMOND.value)


def gen_barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """Preferential attachment; ``k`` is set to the measured connectivity."""
    check_parameters(TopologyKind.BARABASI_ALBERT, n, m)
    rng = random.Random(seed)
    edges = set()
    targets = list(range(m))
    repeated: list[int] = []
    for new in range(m, n):
        edges.update((t, new) for t in targets)
        repeated.extend(targets)
        repeated.extend([new] * m)
        chosen: set[int] = set()
        while len(chosen) < m and new + 1 < n:
            chosen.add(rng.choice(repeated))
        targets = sorted(chosen)
    g = Graph.from_edges(n, edges, TopologyKind.BARABASI_ALBERT.value)
    return Graph(g.n, g.edges, g.family, vertex_connectivity(g))


def generate(kind: TopologyKind | str, n: int, k: int, seed: int = 0) -> Graph:
    """Dispatch on family; ``k`` is the attachment parameter for Barabasi-Albert."""
    kind = TopologyKind(kind)
    if kind is TopologyKind.RANDOM_REGULAR:
        return gen_random_regular(n, k, seed)
    if kind is TopologyKind.K_PASTED_TREE:
        return gen_k_pasted_tree(n, k)
    if kind is TopologyKind.K_DIAMOND:
        return gen_k_diamond(n, k)
    if kind is TopologyKind.MULTIPARTITE_WHEEL:
        return gen_multipartite_wheel(n, k)
    if kind is TopologyKind.GENERALIZED_WHEEL:
        return gen_generalized_wheel(n, k)
    return gen_barabasi_albert(n, k, seed)
