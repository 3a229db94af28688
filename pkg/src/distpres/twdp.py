"""Minimum preservers by dynamic programming over a nice tree decomposition.

A table at node t is a relation sigma on the scope U_t (bag plus terminals
already seen below t): sigma(i, j) = 1 iff the partial solution H_t joins i
and j at their true distance in G. Only realizable tables are generated,
leaf to root, and each node keeps the lightest partial solution per sigma.

sigma is stored as an int bitmask; pair {i, j} with i < j owns bit i*n + j.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import UNREACHABLE, Edge, Graph, Instance, Preserver, all_pairs_distances, bfs, canon
from .oracle import finite_pairs
from .treedec import FORGET, INTRO_EDGE, INTRO_VERTEX, JOIN, LEAF, NiceTreeDecomposition, decompose, make_nice


def pair_bit(i: int, j: int, n: int) -> int:
    if i > j:
        i, j = j, i
    return 1 << (i * n + j)


def sigma_pairs(sigma: int, n: int) -> set[Edge]:
    out = set()
    while sigma:
        low = sigma & -sigma
        b = low.bit_length() - 1
        out.add(divmod(b, n))
        sigma ^= low
    return out


def edge_closure(sigma: int, u: int, v: int, scope, dist, n: int) -> int:
    """Successor of sigma when edge uv joins the partial solution.

    A new shortest p-q path uses uv at most once, and its part before the
    edge is an old shortest path, so one pass over the old relation is enough.
    """
    new = sigma | pair_bit(u, v, n)
    for a, b in ((u, v), (v, u)):
        da, db = dist[a], dist[b]
        ps = [p for p in scope if p == a or sigma & pair_bit(p, a, n)]
        qs = [q for q in scope if q == b or sigma & pair_bit(q, b, n)]
        for p in ps:
            dp = dist[p]
            base = da[p] + 1
            for q in qs:
                if p != q and dp[q] == base + db[q]:
                    new |= pair_bit(p, q, n)
    return new


def join_closure(sigma: int, bag, scope, dist, n: int) -> int:
    """Compose recorded shortest paths through bag vertices until nothing changes."""
    changed = True
    while changed:
        changed = False
        for x in bag:
            dx = dist[x]
            near = [i for i in scope if i != x and sigma & pair_bit(i, x, n)]
            for a in range(len(near)):
                i = near[a]
                di = dist[i]
                for j in near[a + 1:]:
                    bit = pair_bit(i, j, n)
                    if not sigma & bit and di[j] == dx[i] + dx[j] and di[j] != UNREACHABLE:
                        sigma |= bit
                        changed = True
    return sigma


@dataclass
class DPRun:
    """Tables of one DP pass. ``tables[t]`` maps sigma -> (w, backpointer)."""

    inst: Instance
    ntd: NiceTreeDecomposition
    scopes: list[tuple[int, ...]] = field(default_factory=list)
    tables: list[dict[int, tuple[int, object]]] = field(default_factory=list)
    join_overlap: list[int] = field(default_factory=list)
    optimum: int | None = None
    best_sigma: int | None = None

    def realize(self, t: int, sigma: int) -> set[Edge]:
        """Edges of the partial solution stored for (t, sigma)."""
        nodes = self.ntd.nodes
        edges: set[Edge] = set()
        stack = [(t, sigma)]
        while stack:
            t, s = stack.pop()
            node = nodes[t]
            _, back = self.tables[t][s]
            if node.kind == LEAF:
                continue
            if node.kind == JOIN:
                stack.append((node.children[0], back[0]))
                stack.append((node.children[1], back[1]))
                continue
            if node.kind == INTRO_EDGE:
                child_sigma, took = back
                if took:
                    edges.add(node.edge)
            else:
                child_sigma = back
            stack.append((node.children[0], child_sigma))
        return edges


def _put(table: dict, sigma: int, w: int, back) -> None:
    old = table.get(sigma)
    if old is None or w < old[0]:
        table[sigma] = (w, back)


def run_dp(inst: Instance, ntd: NiceTreeDecomposition | None = None, prune_forget: bool = True) -> DPRun:
    """Fill all tables bottom-up.

    With ``prune_forget`` a terminal forgotten while its partner is still
    unseen must reach the bag at true distance, otherwise the table dies.
    Switching it off keeps every realizable sigma (used by tests).
    """
    g = inst.graph
    n = g.n
    if ntd is None:
        ntd = make_nice(decompose(g), g)
    _check_covers(ntd, g)
    pairs = finite_pairs(inst)
    terminals = {v for p in pairs for v in p}
    mates: dict[int, set[int]] = {v: set() for v in terminals}
    for a, b in pairs:
        mates[a].add(b)
        mates[b].add(a)
    dist = all_pairs_distances(g, range(n)).rows

    run = DPRun(inst, ntd)
    below: list[int] = []  # bitmask of vertices appearing in the subtree
    for t, node in enumerate(ntd.nodes):
        seen = 0
        for c in node.children:
            seen |= below[c]
        for v in node.bag:
            seen |= 1 << v
        below.append(seen)
        scope = tuple(sorted(set(node.bag) | {v for v in terminals if seen >> v & 1}))
        run.scopes.append(scope)
        table: dict[int, tuple[int, object]] = {}
        kind = node.kind
        if kind == LEAF:
            table[0] = (0, None)
        elif kind == INTRO_VERTEX:
            for s, (w, _) in run.tables[node.children[0]].items():
                _put(table, s, w, s)
        elif kind == INTRO_EDGE:
            u, v = node.edge
            for s, (w, _) in run.tables[node.children[0]].items():
                _put(table, s, w, (s, False))
                _put(table, edge_closure(s, u, v, scope, dist, n), w + 1, (s, True))
        elif kind == FORGET:
            v = node.vertex
            child = run.tables[node.children[0]]
            if v in terminals:
                mask = 0
                if prune_forget and any(not seen >> u & 1 for u in mates[v]):
                    for x in node.bag:
                        mask |= pair_bit(v, x, n)
                for s, (w, _) in child.items():
                    if mask and not s & mask:
                        continue
                    _put(table, s, w, s)
            else:
                drop = 0
                for x in run.scopes[node.children[0]]:
                    if x != v:
                        drop |= pair_bit(v, x, n)
                for s, (w, _) in child.items():
                    _put(table, s & ~drop, w, s)
        elif kind == JOIN:
            c1, c2 = node.children
            bag = sorted(node.bag)
            bag_edges = [pair_bit(a, b, n) for a in bag for b in bag if a < b and g.has_edge(a, b)]
            overlap = 0
            for s1, (w1, _) in run.tables[c1].items():
                for s2, (w2, _) in run.tables[c2].items():
                    delta = sum(1 for e in bag_edges if s1 & e and s2 & e)
                    overlap = max(overlap, delta)
                    s = join_closure(s1 | s2, bag, scope, dist, n)
                    _put(table, s, w1 + w2 - delta, (s1, s2))
            # each edge is introduced in exactly one subtree, so no edge is counted twice
            assert overlap == 0, f"join {t}: edge realized on both sides"
            run.join_overlap.append(overlap)
        else:  # pragma: no cover
            raise ValueError(f"unknown node kind {kind}")
        run.tables.append(table)

    need = 0
    for a, b in pairs:
        need |= pair_bit(a, b, n)
    root = run.tables[ntd.root]
    best = None
    for s, (w, _) in root.items():
        if s & need == need and (best is None or w < best[0]):
            best = (w, s)
    assert best is not None, "full graph always preserves every distance"
    run.optimum, run.best_sigma = best
    return run


def _check_covers(ntd: NiceTreeDecomposition, g: Graph) -> None:
    intro_v = sorted(t.vertex for t in ntd.nodes if t.kind == INTRO_VERTEX)
    intro_e = sorted(t.edge for t in ntd.nodes if t.kind == INTRO_EDGE)
    if sorted(set(intro_v)) != list(range(g.n)):
        raise ValueError("decomposition does not introduce exactly the graph's vertices")
    if intro_e != list(g.edges):
        raise ValueError("decomposition must introduce every graph edge exactly once")
    if ntd.nodes[ntd.root].bag:
        raise ValueError("root bag must be empty")


def dp_solve(inst: Instance, ntd: NiceTreeDecomposition | None = None, stats: dict | None = None):
    """Exact minimum preserver via the tree-decomposition DP. Returns (size, Preserver)."""
    run = run_dp(inst, ntd)
    edges = run.realize(run.ntd.root, run.best_sigma)
    assert len(edges) == run.optimum
    if stats is not None:
        stats["width"] = run.ntd.width
        stats["nodes"] = len(run.ntd.nodes)
        stats["max_tables"] = max(len(t) for t in run.tables)
        stats["tables"] = sum(len(t) for t in run.tables)
    return run.optimum, Preserver(edges)


def realized_sigma(g: Graph, edges, scope, n: int) -> int:
    """Relation sigma induced on ``scope`` by the subgraph with ``edges`` (reference check)."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    sigma = 0
    for i in scope:
        dh = bfs(adj, i)
        dg = bfs(g.adj, i)
        for j in scope:
            if i < j and dg[j] != UNREACHABLE and dh[j] == dg[j]:
                sigma |= pair_bit(i, j, n)
    return sigma


__all__ = [
    "DPRun",
    "dp_solve",
    "edge_closure",
    "join_closure",
    "pair_bit",
    "realized_sigma",
    "run_dp",
    "sigma_pairs",
    "canon",
]
