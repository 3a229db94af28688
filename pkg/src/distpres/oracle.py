"""Exact minimum preservers: exhaustive reference oracle and branch-and-bound.

Both searches only look at edges lying on some terminal shortest path, since
any other edge of a feasible solution can be dropped.
"""
from __future__ import annotations

import logging
import sys
from itertools import combinations

from .graph import (
    UNREACHABLE,
    Edge,
    Instance,
    Preserver,
    all_pairs_distances,
    prune_minimal,
    shortest_path_edge_union,
    verify_preserver,
)

log = logging.getLogger(__name__)

BRUTE_CAP = 30
_PATH_LIMIT = 20000


class SizeCapError(ValueError):
    """Instance too large for the requested exhaustive method."""


def finite_pairs(inst: Instance) -> list[Edge]:
    """Terminal pairs connected in the host graph (disconnected pairs are trivially kept)."""
    pairs = inst.pairs
    dm = all_pairs_distances(inst.graph, {p for p, _ in pairs})
    return [(p, q) for p, q in pairs if dm.d(p, q) != UNREACHABLE]


def _path_masks(inst: Instance, pairs, cand: list[Edge]):
    """Per pair, the bitmasks (over ``cand``) of all its shortest paths, or None if too many."""
    g = inst.graph
    index = {e: i for i, e in enumerate(cand)}
    dm = all_pairs_distances(g, {v for p in pairs for v in p})
    out = []
    for s, t in pairs:
        ds, dt = dm[s], dm[t]
        total = ds[t]
        masks: list[int] = []
        stack = [(s, 0)]
        while stack:
            u, mask = stack.pop()
            if u == t:
                masks.append(mask)
                if len(masks) > _PATH_LIMIT:
                    return None
                continue
            for w in g.adj[u]:
                if ds[w] == ds[u] + 1 and ds[w] + dt[w] == total:
                    a, b = (u, w) if u < w else (w, u)
                    stack.append((w, mask | (1 << index[(a, b)])))
        # fewest-bit paths first helps the any() short-circuit
        masks.sort(key=int.bit_count)
        out.append(masks)
    out.sort(key=len)
    return out


def brute_force_min(inst: Instance, cap: int = BRUTE_CAP) -> tuple[int, Preserver]:
    """Smallest preserver by enumerating candidate subsets in increasing size.

    Within one size, subsets come in lexicographic order of the sorted
    candidate list, so the witness is the lexicographically smallest optimum.
    """
    pairs = finite_pairs(inst)
    cand = sorted(shortest_path_edge_union(inst.graph, pairs))
    if len(cand) > cap:
        raise SizeCapError(f"{len(cand)} candidate edges exceed the brute-force cap {cap}")
    if not pairs:
        return 0, Preserver()
    masks = _path_masks(inst, pairs, cand)
    bits = [1 << i for i in range(len(cand))]
    for k in range(len(cand) + 1):
        for combo in combinations(range(len(cand)), k):
            if masks is None:
                if verify_preserver(inst, [cand[i] for i in combo]):
                    return k, Preserver(cand[i] for i in combo)
                continue
            h = 0
            for i in combo:
                h |= bits[i]
            if all(any(pm & ~h == 0 for pm in pms) for pms in masks):
                return k, Preserver(cand[i] for i in combo)
    raise AssertionError("full candidate set must be a preserver")


class _Search:
    """Branch-and-bound over chains of candidate edges.

    A chain is a maximal path of candidate edges whose inner vertices are
    non-terminals of candidate degree 2. A shortest path entering a chain has
    to run through all of it, so an optimal preserver takes each chain whole
    or not at all; chains are the decision units.
    """

    def __init__(self, inst: Instance, pairs: list[Edge]):
        g = inst.graph
        self.pairs = pairs
        cand = sorted(shortest_path_edge_union(g, pairs))
        self.cand = cand
        eidx = {e: i for i, e in enumerate(cand)}
        terminals = {v for p in pairs for v in p}
        cadj: list[list[int]] = [[] for _ in range(g.n)]
        for u, v in cand:
            cadj[u].append(v)
            cadj[v].append(u)

        unit_of = [-1] * len(cand)
        units: list[list[int]] = []

        def inner(v):
            return v not in terminals and len(cadj[v]) == 2

        for i, (u, v) in enumerate(cand):
            if unit_of[i] >= 0:
                continue
            uid = len(units)
            members = [i]
            unit_of[i] = uid
            for start, nxt in ((u, v), (v, u)):
                prev, cur = start, nxt
                while inner(cur):
                    w = cadj[cur][0] if cadj[cur][0] != prev else cadj[cur][1]
                    j = eidx[(cur, w) if cur < w else (w, cur)]
                    if unit_of[j] >= 0:
                        break
                    unit_of[j] = uid
                    members.append(j)
                    prev, cur = cur, w
            units.append(sorted(members))
        self.units = units
        self.unit_of = unit_of
        self.weight = [len(m) for m in units]
        self.key = [m[0] for m in units]

        dm = all_pairs_distances(g, terminals)
        # per pair: oriented DAG edges (a, b, unit) in topological order
        self.dags = []
        pair_count = [0] * len(units)
        for s, t in pairs:
            ds, dt = dm[s], dm[t]
            total = ds[t]
            arcs = []
            for i, (u, v) in enumerate(cand):
                if ds[u] + 1 + dt[v] == total:
                    arcs.append((ds[u], u, v, unit_of[i]))
                elif ds[v] + 1 + dt[u] == total:
                    arcs.append((ds[v], v, u, unit_of[i]))
            arcs.sort()
            dag = [(a, b, uid) for _, a, b, uid in arcs]
            self.dags.append((s, t, dag))
            for uid in {a[2] for a in dag}:
                pair_count[uid] += 1
        self.pair_count = pair_count
        self.status = [0] * len(units)  # 0 undecided, 1 chosen, -1 excluded
        self.nodes = 0

    def analyse(self):
        """Propagate one node.

        Returns None when the node is dead, else (lower_bound_extra, forced,
        useless, residual) where residual lists per-pair remaining cost.
        """
        status = self.status
        useful = set()
        forced = set()
        residual = []
        for s, t, dag in self.dags:
            fwd = {s: 1}
            cost = {s: 0}
            for a, b, uid in dag:
                st = status[uid]
                if st < 0:
                    continue
                fa = fwd.get(a)
                if fa is None:
                    continue
                fwd[b] = fwd.get(b, 0) + fa
                c = cost[a] + (0 if st > 0 else 1)
                if c < cost.get(b, UNREACHABLE):
                    cost[b] = c
            total = fwd.get(t, 0)
            if not total:
                return None
            bwd = {t: 1}
            pu = set()
            for a, b, uid in reversed(dag):
                if status[uid] < 0:
                    continue
                gb = bwd.get(b)
                if gb is None:
                    continue
                fa = fwd.get(a)
                if fa is None:
                    continue
                bwd[a] = bwd.get(a, 0) + gb
                pu.add(uid)
                if fa * gb == total and status[uid] == 0:
                    forced.add(uid)
            useful |= pu
            residual.append((cost[t], pu))
        return useful, forced, residual

    def lower_bound(self, residual) -> int:
        status = self.status
        best = 0
        packed = 0
        used: set[int] = set()
        for r, pu in sorted(residual, key=lambda x: -x[0]):
            if r == 0:
                break
            best = max(best, r)
            open_units = {u for u in pu if status[u] == 0}
            if used.isdisjoint(open_units):
                packed += r
                used |= open_units
        return max(best, packed)


def _run(search: _Search, order, bound: int, strict: bool, floor: int = 0):
    """DFS, include-first along ``order``. Returns (cost, chosen units) or None.

    strict=True looks for a solution cheaper than ``bound``, stopping early at
    one of cost ``floor`` (a known lower bound); otherwise the first solution
    of cost <= bound in DFS order is returned.
    """
    status = search.status
    weight = search.weight
    best = None
    limit = bound

    def dfs(chosen_w: int):
        nonlocal best, limit
        search.nodes += 1
        if search.nodes % 100000 == 0:
            log.info("bb: %d nodes, incumbent %s", search.nodes, limit)
        res = search.analyse()
        if res is None:
            return False
        useful, forced, residual = res
        trail = []
        for uid in range(len(status)):
            if status[uid] > 0 and uid not in useful:
                return False
        for uid in forced:
            status[uid] = 1
            chosen_w += weight[uid]
            trail.append(uid)
        for uid in range(len(status)):
            if status[uid] == 0 and uid not in useful:
                status[uid] = -1
                trail.append(uid)
        try:
            if forced:
                # residual costs changed; recompute before bounding
                res = search.analyse()
                if res is None:
                    return False
                _, _, residual = res
            lb = chosen_w + search.lower_bound(residual)
            if lb > limit or (strict and lb >= limit):
                return False
            if all(r == 0 for r, _ in residual):
                best = (chosen_w, [u for u in range(len(status)) if status[u] > 0])
                if not strict or chosen_w <= floor:
                    return True
                limit = chosen_w
                return False
            for uid in order:
                if status[uid] == 0:
                    break
            else:  # pragma: no cover - residual > 0 implies an open unit
                return False
            status[uid] = 1
            done = dfs(chosen_w + weight[uid])
            status[uid] = 0
            if done:
                return True
            if strict and chosen_w + 0 >= limit:
                return False
            status[uid] = -1
            done = dfs(chosen_w)
            status[uid] = 0
            return done
        finally:
            for uid in trail:
                status[uid] = 0

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20 * len(status) + 1000))
    try:
        dfs(0)
    finally:
        sys.setrecursionlimit(old)
    return best


def bb_min(inst: Instance, stats: dict | None = None, canonical: bool = True) -> tuple[int, Preserver]:
    """Exact minimum preserver by branch-and-bound.

    The first search branches on high-impact chains first (most pairs whose
    shortest-path DAG contains them), starting from a pruned incumbent. With
    ``canonical`` a second search, include-first in ascending edge order and
    bounded by the optimum, fixes the witness independently of that order.
    """
    pairs = finite_pairs(inst)
    if not pairs:
        return 0, Preserver()
    search = _Search(inst, pairs)
    n_units = len(search.units)
    heur = sorted(range(n_units), key=lambda u: (-search.pair_count[u], search.key[u]))
    # a 1-minimal preserver is a cheap starting incumbent
    start = prune_minimal(inst, search.cand)
    opt = start.size
    edges = start.sorted()
    root = search.analyse()
    floor = search.lower_bound(root[2]) if root else 0
    if opt > floor:
        found = _run(search, heur, opt, strict=True, floor=floor)
        if found is not None:
            opt = found[0]
            edges = [search.cand[i] for uid in found[1] for i in search.units[uid]]
    if canonical:
        canon_order = sorted(range(n_units), key=lambda u: search.key[u])
        again = _run(search, canon_order, opt, strict=False)
        assert again is not None and again[0] == opt
        edges = [search.cand[i] for uid in again[1] for i in search.units[uid]]
    if stats is not None:
        stats["nodes"] = search.nodes
        stats["units"] = n_units
        stats["candidates"] = len(search.cand)
    return opt, Preserver(edges)
