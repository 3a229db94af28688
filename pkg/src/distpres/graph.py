"""Graphs, terminal specifications, BFS distances and preserver checks."""
from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

# 32-bit distance sentinel for disconnected pairs
UNREACHABLE = 2**31 - 1

Edge = tuple[int, int]


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected unweighted graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise ValueError("negative vertex count")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        seen: set[Edge] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            e = canon(u, v)
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), tuple(sorted(seen)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        # cached lazily; the dataclass is frozen so go through __dict__
        try:
            return self.__dict__["_edge_set"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", s)
            return s

    def subgraph(self, edges: Iterable[Edge]) -> "Graph":
        """Spanning subgraph (same vertex set) with the given edges."""
        return Graph.from_edges(self.n, edges)


@dataclass(frozen=True)
class Subset:
    """Subsetwise terminals: every pair inside ``vertices``."""

    vertices: tuple[int, ...]

    def __init__(self, vertices: Iterable[int]):
        object.__setattr__(self, "vertices", tuple(sorted(set(vertices))))


@dataclass(frozen=True)
class Pairs:
    """Pairwise terminals: explicit unordered pairs, canonical and deduplicated."""

    pairs: tuple[Edge, ...]

    def __init__(self, pairs: Iterable[Sequence[int]]):
        out = set()
        for u, v in pairs:
            if u == v:
                raise ValueError(f"terminal pair with equal endpoints {u}")
            out.add(canon(u, v))
        object.__setattr__(self, "pairs", tuple(sorted(out)))


TerminalSpec = Subset | Pairs


def pairs_of(spec: TerminalSpec) -> list[Edge]:
    if isinstance(spec, Subset):
        return list(combinations(spec.vertices, 2))
    return list(spec.pairs)


def terminals_of(spec: TerminalSpec) -> list[int]:
    if isinstance(spec, Subset):
        return list(spec.vertices)
    return sorted({v for p in spec.pairs for v in p})


@dataclass(frozen=True)
class Instance:
    graph: Graph
    terminals: TerminalSpec
    budget: int | None = None

    def __post_init__(self):
        n = self.graph.n
        for v in terminals_of(self.terminals):
            if not 0 <= v < n:
                raise ValueError(f"terminal {v} out of range for n={n}")
        if self.budget is not None and not 0 <= self.budget <= self.graph.m:
            raise ValueError(f"budget {self.budget} outside [0, m={self.graph.m}]")

    @property
    def pairs(self) -> list[Edge]:
        return pairs_of(self.terminals)


@dataclass(frozen=True)
class Preserver:
    edges: frozenset[Edge]

    def __init__(self, edges: Iterable[Sequence[int]] = ()):
        object.__setattr__(self, "edges", frozenset(canon(u, v) for u, v in edges))

    @property
    def size(self) -> int:
        return len(self.edges)

    def sorted(self) -> list[Edge]:
        return sorted(self.edges)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.sorted())


def bfs(adj: Sequence[Sequence[int]], source: int) -> array:
    dist = array("i", [UNREACHABLE]) * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = du
                queue.append(w)
    return dist


@dataclass(frozen=True)
class DistanceMatrix:
    rows: dict[int, array]

    def d(self, u: int, v: int) -> int:
        return self.rows[u][v]

    def __getitem__(self, u: int) -> array:
        return self.rows[u]


def all_pairs_distances(g: Graph, sources: Iterable[int]) -> DistanceMatrix:
    rows = {}
    for s in sources:
        if not 0 <= s < g.n:
            raise ValueError(f"source {s} out of range for n={g.n}")
        if s not in rows:
            rows[s] = bfs(g.adj, s)
    return DistanceMatrix(rows)


def _adjacency(n: int, edges: Iterable[Edge]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def shortest_path_edge_union(g: Graph, pairs: Iterable[Edge]) -> set[Edge]:
    """Edges lying on at least one shortest path of some pair."""
    pairs = list(pairs)
    dm = all_pairs_distances(g, {v for p in pairs for v in p})
    out: set[Edge] = set()
    for p, q in pairs:
        dp, dq = dm[p], dm[q]
        total = dp[q]
        if total == UNREACHABLE:
            continue
        for u, v in g.edges:
            a, b = dp[u], dq[v]
            if a != UNREACHABLE and b != UNREACHABLE and a + 1 + b == total:
                out.add((u, v))
                continue
            a, b = dp[v], dq[u]
            if a != UNREACHABLE and b != UNREACHABLE and a + 1 + b == total:
                out.add((u, v))
    return out


def first_violation(inst: Instance, edges: Iterable[Sequence[int]]):
    """First pair (canonical order) whose distance ``edges`` fails to preserve, or None.

    Pairs disconnected in the host graph count as preserved.
    """
    g = inst.graph
    h = Preserver(edges)
    for e in h.edges:
        if e not in g.edge_set:
            raise ValueError(f"edge {e} is not an edge of the host graph")
    pairs = inst.pairs
    if not pairs:
        return None
    hadj = _adjacency(g.n, h.edges)
    gd: dict[int, array] = {}
    hd: dict[int, array] = {}
    for p, q in pairs:
        if p not in gd:
            gd[p] = bfs(g.adj, p)
            hd[p] = bfs(hadj, p)
        if gd[p][q] != hd[p][q]:
            return (p, q)
    return None


def verify_preserver(inst: Instance, edges: Iterable[Sequence[int]]) -> bool:
    return first_violation(inst, edges) is None


def prune_minimal(inst: Instance, edges: Iterable[Sequence[int]]) -> Preserver:
    """Drop edges (descending canonical order) while the result stays a preserver.

    One pass is enough: feasibility is monotone under edge inclusion, so an
    edge that was needed when tested stays needed after later removals.
    """
    h = set(Preserver(edges).edges)
    if not verify_preserver(inst, h):
        raise ValueError("input is not a distance preserver")
    for e in sorted(h, reverse=True):
        h.discard(e)
        if not verify_preserver(inst, h):
            h.add(e)
    return Preserver(h)
