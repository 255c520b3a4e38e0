"""Weighted-graph machinery: flows, cuts, spanning trees, partitions.

Graphs here are undirected with positive integer weights; a pairwise key
is one budget usable in either direction, so directed capacities collapse
onto a single weight per pair.  Zero-weight pairs are simply absent.

The exhaustive operations (cut enumeration, partition enumeration, tree
packing) are oracles for testing the fast paths and for measuring how far
the greedy protocols sit from optimal.  Each is protected by a hard
instance-size guard and raises InstanceTooLarge beyond it rather than
silently truncating.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import GraphDisconnected, InstanceTooLarge

CUT_ENUM_NODE_LIMIT = 20        # min_st_cut_bruteforce enumerates 2**(m-2) sides
PARTITION_NODE_LIMIT = 12       # Bell(12) is ~4.2e6, the practical ceiling
TREE_ENUM_NODE_LIMIT = 8        # spanning-tree enumeration scans C(E, m-1) subsets
PACKING_NODE_LIMIT = 6          # tree-packing search space explodes past this
PACKING_WEIGHT_LIMIT = 24

TIE_BREAK_POLICIES = ("lex-kruskal", "degree-min")


class WeightedGraph:
    """Undirected graph on nodes 0..m-1 with positive integer edge weights."""

    __slots__ = ("m", "_weights")

    def __init__(self, m: int, edges: dict[tuple[int, int], int] | None = None):
        if m < 1:
            raise ValueError(f"need at least one node, got m={m}")
        self.m = m
        self._weights: dict[tuple[int, int], int] = {}
        for (i, j), w in (edges or {}).items():
            self.set_weight(i, j, w)

    def _check_pair(self, i: int, j: int) -> tuple[int, int]:
        if i == j:
            raise ValueError(f"self-loop ({i}, {j}) is not allowed")
        if not (0 <= i < self.m and 0 <= j < self.m):
            raise ValueError(f"pair ({i}, {j}) out of range for m={self.m}")
        return (i, j) if i < j else (j, i)

    def weight(self, i: int, j: int) -> int:
        return self._weights.get(self._check_pair(i, j), 0)

    def set_weight(self, i: int, j: int, w: int) -> None:
        """Set an edge weight; zero removes the edge."""
        pair = self._check_pair(i, j)
        if not isinstance(w, int) or w < 0:
            raise ValueError(f"weight must be a nonnegative int, got {w!r}")
        if w == 0:
            self._weights.pop(pair, None)
        else:
            self._weights[pair] = w

    def edges(self) -> list[tuple[int, int, int]]:
        """All (i, j, weight) triples, i < j, in ascending pair order."""
        return [(i, j, self._weights[(i, j)]) for (i, j) in sorted(self._weights)]

    def neighbors(self, u: int) -> list[int]:
        out = set()
        for i, j in self._weights:
            if i == u:
                out.add(j)
            elif j == u:
                out.add(i)
        return sorted(out)

    def edge_count(self) -> int:
        return len(self._weights)

    def total_weight(self) -> int:
        return sum(self._weights.values())

    def copy(self) -> "WeightedGraph":
        return WeightedGraph(self.m, dict(self._weights))

    def canonical_key(self) -> tuple:
        """Hashable identity of (m, edge multiset); used for memoization."""
        return (self.m, tuple(sorted(self._weights.items())))

    def __repr__(self) -> str:
        return f"WeightedGraph(m={self.m}, edges={dict(sorted(self._weights.items()))})"


def is_connected(g: WeightedGraph) -> bool:
    """True iff every node is reachable from node 0 over positive edges."""
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.m


# --- partitions ---------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """A partition of the node set [0, m) into disjoint nonempty blocks.

    Blocks are canonically ordered by their smallest element, so equal
    partitions compare and print identically.
    """

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if not self.blocks or any(not b for b in self.blocks):
            raise ValueError("blocks must be nonempty")
        nodes = sorted(n for b in self.blocks for n in b)
        if len(nodes) != len(set(nodes)):
            raise ValueError("blocks must be disjoint")
        if nodes != list(range(len(nodes))):
            raise ValueError(f"blocks must cover 0..{len(nodes) - 1} exactly")
        ordered = tuple(sorted(self.blocks, key=min))
        object.__setattr__(self, "blocks", ordered)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def m(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_index(self) -> dict[int, int]:
        out = {}
        for t, block in enumerate(self.blocks):
            for node in block:
                out[node] = t
        return out

    def crossing_weight(self, g: WeightedGraph) -> int:
        """Total weight of edges whose endpoints lie in different blocks."""
        where = self.block_index()
        return sum(w for i, j, w in g.edges() if where[i] != where[j])

    def normalized_weight(self, g: WeightedGraph) -> Fraction:
        """Crossing weight divided by k - 1; needs at least two blocks."""
        if self.k < 2:
            raise ValueError("normalized weight needs k >= 2 blocks")
        return Fraction(self.crossing_weight(g), self.k - 1)

    def __str__(self) -> str:
        return "|".join("{" + ",".join(str(n) for n in sorted(b)) + "}" for b in self.blocks)


def enumerate_partitions(m: int, must_split: frozenset[int] | None = None):
    """Yield every partition of [0, m) with k >= 2 blocks, each meeting must_split.

    must_split=None means every node set counts (equivalent to passing all
    of [0, m)).  Enumeration is by restricted growth strings, so the order
    is deterministic.  Hard guard: m <= 12.
    """
    if m > PARTITION_NODE_LIMIT:
        raise InstanceTooLarge(f"partition enumeration is limited to m <= {PARTITION_NODE_LIMIT}, got {m}")
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    required = set(range(m)) if must_split is None else set(must_split)
    if not required <= set(range(m)):
        raise ValueError(f"must_split {sorted(required)} out of range for m={m}")

    code = [0] * m

    def extend(pos: int, top: int):
        if pos == m:
            yield tuple(code)
            return
        for value in range(top + 2):
            code[pos] = value
            yield from extend(pos + 1, max(top, value))

    for rgs in extend(1, 0):
        k = max(rgs) + 1
        if k < 2:
            continue
        blocks = [set() for _ in range(k)]
        for node, which in enumerate(rgs):
            blocks[which].add(node)
        if not all(block & required for block in blocks):
            continue
        yield Partition(tuple(frozenset(b) for b in blocks))


def min_normalized_multicut(
    g: WeightedGraph, must_split: frozenset[int] | None = None
) -> tuple[Fraction, Partition]:
    """Minimize crossing_weight / (k - 1) over qualifying partitions, exactly.

    Returns the exact rational minimum and the first partition attaining
    it in enumeration order.  Hard guard: m <= 12.
    """
    best: Fraction | None = None
    witness: Partition | None = None
    for partition in enumerate_partitions(g.m, must_split):
        value = partition.normalized_weight(g)
        if best is None or value < best:
            best, witness = value, partition
    if best is None or witness is None:
        raise ValueError(f"no qualifying partition of m={g.m} nodes")
    return best, witness


# --- flows and cuts -----------------------------------------------------


@dataclass(frozen=True)
class FlowAssignment:
    """An integral s-t flow: value, per-edge directed flows, path decomposition.

    flows maps (u, v) to a positive amount from u to v; at most one
    direction per unordered pair carries flow.  paths is a tuple of
    (node tuple, amount) entries sorted lexicographically; their per-edge
    sums reproduce flows exactly and their amounts sum to value.
    """

    value: int
    flows: dict[tuple[int, int], int]
    paths: tuple[tuple[tuple[int, ...], int], ...]


@dataclass(frozen=True)
class CutResult:
    """An s-t cut witness: the source-side node set and the crossing weight."""

    value: int
    source_side: frozenset[int]
    m: int

    def partition(self) -> Partition:
        rest = frozenset(range(self.m)) - self.source_side
        return Partition((self.source_side, rest))


def _edmonds_karp(g: WeightedGraph, s: int, t: int) -> tuple[int, dict[int, dict[int, int]]]:
    # Residual capacities start at the full weight in both directions;
    # pushing f along u->v moves capacity from (u,v) to (v,u), which is
    # the standard undirected-edge treatment.
    cap: dict[int, dict[int, int]] = {u: {} for u in range(g.m)}
    for i, j, w in g.edges():
        cap[i][j] = w
        cap[j][i] = w
    value = 0
    while True:
        parent: dict[int, int | None] = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in sorted(cap[u]):
                if v not in parent and cap[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return value, cap
        bottleneck = None
        node = t
        while parent[node] is not None:
            prev = parent[node]
            c = cap[prev][node]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            node = prev
        assert bottleneck is not None and bottleneck > 0
        node = t
        while parent[node] is not None:
            prev = parent[node]
            cap[prev][node] -= bottleneck
            cap[node][prev] += bottleneck
            node = prev
        value += bottleneck


def _decompose(
    flows: dict[tuple[int, int], int], s: int, t: int
) -> tuple[tuple[tuple[int, ...], int], ...]:
    remaining = dict(flows)
    paths = []
    while True:
        adjacency: dict[int, list[int]] = {}
        for (u, v), f in remaining.items():
            if f > 0:
                adjacency.setdefault(u, []).append(v)
        for u in adjacency:
            adjacency[u].sort()
        parent: dict[int, int | None] = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in adjacency.get(u, ()):
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            break
        path = [t]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])  # type: ignore[arg-type]
        path.reverse()
        hops = list(zip(path, path[1:]))
        amount = min(remaining[hop] for hop in hops)
        for hop in hops:
            remaining[hop] -= amount
            if remaining[hop] == 0:
                del remaining[hop]
        paths.append((tuple(path), amount))
    return tuple(sorted(paths))


def max_flow(g: WeightedGraph, s: int, t: int) -> FlowAssignment:
    """Maximum s-t flow with an exact integral path decomposition.

    The per-edge flows are rebuilt from the decomposition, so any cyclic
    slack the augmenting search produced is cancelled and the published
    flows are exactly the union of the s-t paths.
    """
    if s == t:
        raise ValueError("source and sink must differ")
    for node in (s, t):
        if not (0 <= node < g.m):
            raise ValueError(f"terminal {node} out of range for m={g.m}")
    value, cap = _edmonds_karp(g, s, t)
    net: dict[tuple[int, int], int] = {}
    for i, j, w in g.edges():
        x = (cap[j][i] - cap[i][j]) // 2
        if x > 0:
            net[(i, j)] = x
        elif x < 0:
            net[(j, i)] = -x
    paths = _decompose(net, s, t)
    rebuilt: dict[tuple[int, int], int] = {}
    for path, amount in paths:
        for u, v in zip(path, path[1:]):
            rebuilt[(u, v)] = rebuilt.get((u, v), 0) + amount
    assert sum(amount for _, amount in paths) == value
    return FlowAssignment(value=value, flows=rebuilt, paths=paths)


def min_st_cut(g: WeightedGraph, s: int, t: int) -> CutResult:
    """Minimum s-t cut from the max-flow residual graph (fast path)."""
    if s == t:
        raise ValueError("source and sink must differ")
    value, cap = _edmonds_karp(g, s, t)
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v, c in cap[u].items():
            if c > 0 and v not in seen:
                seen.add(v)
                queue.append(v)
    side = frozenset(seen)
    crossing = sum(w for i, j, w in g.edges() if (i in side) != (j in side))
    assert crossing == value, "residual cut does not match the flow value"
    return CutResult(value=value, source_side=side, m=g.m)


def min_st_cut_bruteforce(g: WeightedGraph, s: int, t: int) -> CutResult:
    """Minimum s-t cut by enumerating all 2**(m-2) source sides.

    Oracle for max_flow; keeps the first minimizer in enumeration order.
    Hard guard: m <= 20.
    """
    if g.m > CUT_ENUM_NODE_LIMIT:
        raise InstanceTooLarge(f"cut enumeration is limited to m <= {CUT_ENUM_NODE_LIMIT}, got {g.m}")
    if s == t:
        raise ValueError("source and sink must differ")
    others = [v for v in range(g.m) if v not in (s, t)]
    edges = g.edges()
    best_value: int | None = None
    best_side: frozenset[int] | None = None
    for mask in range(1 << len(others)):
        side = {s} | {others[b] for b in range(len(others)) if (mask >> b) & 1}
        crossing = sum(w for i, j, w in edges if (i in side) != (j in side))
        if best_value is None or crossing < best_value:
            best_value = crossing
            best_side = frozenset(side)
    assert best_value is not None and best_side is not None
    return CutResult(value=best_value, source_side=best_side, m=g.m)


# --- spanning trees -----------------------------------------------------


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class SpanningTree:
    """m-1 edges forming a tree on nodes 0..m-1, stored in sorted order."""

    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        m = len(self.edges) + 1
        ordered = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        uf = _UnionFind(m)
        for i, j in ordered:
            if not (0 <= i < j < m):
                raise ValueError(f"edge ({i}, {j}) cannot belong to a tree on {m} nodes")
            if not uf.union(i, j):
                raise ValueError(f"edges {ordered} contain a cycle")
        object.__setattr__(self, "edges", ordered)

    @property
    def m(self) -> int:
        return len(self.edges) + 1

    def weight(self, g: WeightedGraph) -> int:
        return sum(g.weight(i, j) for i, j in self.edges)

    def adjacency(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in range(self.m)}
        for i, j in self.edges:
            out[i].append(j)
            out[j].append(i)
        for v in out:
            out[v].sort()
        return out

    def max_degree(self) -> int:
        return max(len(vs) for vs in self.adjacency().values())


def maximum_spanning_tree(g: WeightedGraph, tie_break: str = "lex-kruskal") -> SpanningTree:
    """Maximum-weight spanning tree under a named deterministic tie-break.

    lex-kruskal: edges sorted by (weight desc, smaller endpoint asc,
    larger endpoint asc), greedily added when acyclic.

    degree-min: among maximum-weight addable edges, pick the one that
    minimizes the resulting maximum node degree of the partial forest,
    breaking remaining ties lexicographically.  Both policies produce a
    maximum-weight tree; they differ only in which one.
    """
    if tie_break not in TIE_BREAK_POLICIES:
        raise ValueError(f"unknown tie-break policy {tie_break!r}; choose from {TIE_BREAK_POLICIES}")
    if not is_connected(g):
        raise GraphDisconnected("graph has no spanning tree")
    if tie_break == "lex-kruskal":
        uf = _UnionFind(g.m)
        chosen = []
        for i, j, _ in sorted(g.edges(), key=lambda e: (-e[2], e[0], e[1])):
            if uf.union(i, j):
                chosen.append((i, j))
                if len(chosen) == g.m - 1:
                    break
        return SpanningTree(tuple(chosen))

    uf = _UnionFind(g.m)
    degree = [0] * g.m
    chosen = []
    while len(chosen) < g.m - 1:
        addable = [(i, j, w) for i, j, w in g.edges() if uf.find(i) != uf.find(j)]
        top = max(w for _, _, w in addable)
        current_max = max(degree)
        best = min(
            ((i, j) for i, j, w in addable if w == top),
            key=lambda e: (max(current_max, degree[e[0]] + 1, degree[e[1]] + 1), e),
        )
        uf.union(*best)
        degree[best[0]] += 1
        degree[best[1]] += 1
        chosen.append(best)
    return SpanningTree(tuple(chosen))


def enumerate_spanning_trees(g: WeightedGraph):
    """Yield every spanning tree of g, in lexicographic edge-set order.

    Exhaustive oracle for maximum_spanning_tree.  Hard guard: m <= 8.
    """
    if g.m > TREE_ENUM_NODE_LIMIT:
        raise InstanceTooLarge(f"tree enumeration is limited to m <= {TREE_ENUM_NODE_LIMIT}, got {g.m}")
    pairs = [(i, j) for i, j, _ in g.edges()]
    for combo in itertools.combinations(pairs, g.m - 1):
        uf = _UnionFind(g.m)
        if all(uf.union(i, j) for i, j in combo):
            yield SpanningTree(combo)


def optimal_tree_packing_bruteforce(g: WeightedGraph) -> int:
    """Longest sequence of spanning trees a budget graph can support.

    A tree may be picked when all its edges still have positive weight;
    picking it costs one unit on each tree edge.  The optimum is searched
    by DFS over tree choices with memoization on the residual graph.
    Hard guards: m <= 6 and total weight <= 24.
    """
    if g.m > PACKING_NODE_LIMIT:
        raise InstanceTooLarge(f"tree packing is limited to m <= {PACKING_NODE_LIMIT}, got {g.m}")
    if g.total_weight() > PACKING_WEIGHT_LIMIT:
        raise InstanceTooLarge(
            f"tree packing is limited to total weight <= {PACKING_WEIGHT_LIMIT}, got {g.total_weight()}"
        )
    trees = [t.edges for t in enumerate_spanning_trees(g)]
    memo: dict[tuple, int] = {}

    def connected(weights: dict[tuple[int, int], int]) -> bool:
        seen = {0}
        queue = deque([0])
        adjacency: dict[int, list[int]] = {}
        for (i, j), w in weights.items():
            if w > 0:
                adjacency.setdefault(i, []).append(j)
                adjacency.setdefault(j, []).append(i)
        while queue:
            u = queue.popleft()
            for v in adjacency.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == g.m

    def pack(weights: dict[tuple[int, int], int]) -> int:
        key = tuple(sorted(weights.items()))
        if key in memo:
            return memo[key]
        if not connected(weights):
            memo[key] = 0
            return 0
        ceiling = sum(weights.values()) // (g.m - 1)
        best = 0
        for tree in trees:
            if all(weights.get(e, 0) > 0 for e in tree):
                child = dict(weights)
                for e in tree:
                    child[e] -= 1
                    if child[e] == 0:
                        del child[e]
                best = max(best, 1 + pack(child))
                if best == ceiling:
                    break
        memo[key] = best
        return best

    return pack({(i, j): w for i, j, w in g.edges()})
