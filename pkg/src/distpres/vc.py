"""Subsetwise preservers parameterized by vertex cover.

Outside a vertex cover C the graph is an independent set, split into classes
of vertices with identical neighbourhoods. Terminals of one class can share
one connection set X_i (a subset of the class neighbourhood), non-terminals
of a class are interchangeable, so a solution is fixed by a subgraph of G[C]
plus one X_i per class. We enumerate those.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .graph import Edge, Graph, Instance, Pairs, Preserver, canon, prune_minimal, shortest_path_edge_union, verify_preserver
from .oracle import finite_pairs

log = logging.getLogger(__name__)


def min_vertex_cover(g: Graph, limit: int | None = None) -> frozenset[int] | None:
    """Minimum vertex cover by branching on an uncovered edge, for growing k.

    With ``limit``, gives up (returns None) once no cover of that size exists.
    """

    def matching(edges: list[Edge]) -> int:
        used: set[int] = set()
        size = 0
        for u, v in edges:
            if u not in used and v not in used:
                used |= {u, v}
                size += 1
        return size

    def search(edges: list[Edge], k: int) -> list[int] | None:
        if not edges:
            return []
        # a matching needs one cover vertex per edge
        if matching(edges) > k:
            return None
        u, v = edges[0]
        for x in (u, v):
            rest = [e for e in edges if x not in e]
            sub = search(rest, k - 1)
            if sub is not None:
                return [x] + sub
        return None

    edges = list(g.edges)
    k = matching(edges)
    while limit is None or k <= limit:
        found = search(edges, k)
        if found is not None:
            return frozenset(found)
        k += 1
    return None


@dataclass(frozen=True)
class VcClass:
    members: tuple[int, ...]
    neighborhood: tuple[int, ...]
    terminals: tuple[int, ...]
    # vertices kept after the reduction rules
    retained: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.retained)


@dataclass(frozen=True)
class CoverStructure:
    cover: tuple[int, ...]
    independent: tuple[int, ...]
    classes: tuple[VcClass, ...]


def neighborhood_classes(g: Graph, cover, terminals=()) -> CoverStructure:
    """Group the vertices outside ``cover`` by neighbourhood and apply the rules.

    A class with terminals keeps exactly its terminals; a class without keeps
    its lowest-id vertex, or nothing when the class neighbourhood is empty.
    """
    cover = frozenset(cover)
    for u, v in g.edges:
        if u not in cover and v not in cover:
            raise ValueError(f"not a vertex cover: edge ({u}, {v}) uncovered")
    term = set(terminals)
    groups: dict[tuple[int, ...], list[int]] = {}
    indep = [v for v in range(g.n) if v not in cover]
    for v in indep:
        groups.setdefault(g.adj[v], []).append(v)
    classes = []
    for nb, members in sorted(groups.items(), key=lambda kv: kv[1][0]):
        ts = tuple(v for v in members if v in term)
        if ts:
            kept = ts
        elif nb:
            kept = (members[0],)
        else:
            kept = ()
        classes.append(VcClass(tuple(members), nb, ts, kept))
    return CoverStructure(tuple(sorted(cover)), tuple(indep), tuple(classes))


def reduced_instance(inst: Instance, struct: CoverStructure) -> Instance:
    """Instance with every edge at a discarded independent vertex removed (ids unchanged)."""
    gone = {v for c in struct.classes for v in c.members if v not in c.retained}
    g = inst.graph
    keep = [e for e in g.edges if e[0] not in gone and e[1] not in gone]
    return Instance(Graph.from_edges(g.n, keep), inst.terminals)


def _subsets(items, min_nonempty: int = 1):
    """Subsets by size then lexicographically; sizes 1..min_nonempty-1 skipped."""
    yield ()
    for k in range(max(1, min_nonempty), len(items) + 1):
        yield from combinations(items, k)


class _Sweep:
    def __init__(self, inst: Instance, struct: CoverStructure):
        self.inst = inst
        self.struct = struct
        cov = set(struct.cover)
        self.cover_edges = [e for e in inst.graph.edges if e[0] in cov and e[1] in cov]
        # classes that can carry edges; a lone edge to a non-terminal is a dead end
        self.active = [c for c in struct.classes if c.r and c.neighborhood]
        self.options = [list(_subsets(c.neighborhood, 1 if c.terminals else 2)) for c in self.active]
        self.candidates = 0

    def edges_for(self, hc, xs) -> list[Edge]:
        out = list(hc)
        for c, x in zip(self.active, xs):
            for v in c.retained:
                out.extend(canon(v, w) for w in x)
        return out

    def classes_search(self, hc, bound: int, strict: bool):
        """First (in enumeration order) completion of ``hc`` with cost below / at ``bound``."""
        full = [c.neighborhood for c in self.active]
        if not verify_preserver(self.inst, self.edges_for(hc, full)):
            return None
        chosen: list = []
        base = len(hc)

        def rec(i: int, cost: int):
            if i == len(self.active):
                self.candidates += 1
                if verify_preserver(self.inst, self.edges_for(hc, chosen)):
                    return cost
                return None
            r = self.active[i].r
            for x in self.options[i]:
                c = cost + r * len(x)
                if c > bound or (strict and c >= bound):
                    break  # options grow in size
                chosen.append(x)
                ok = True
                if i + 1 < len(self.active):
                    # optimistic completion: undecided classes take everything
                    ok = verify_preserver(self.inst, self.edges_for(hc, chosen + full[i + 1:]))
                res = rec(i + 1, c) if ok else None
                if res is not None:
                    return res
                chosen.pop()
            return None

        res = rec(0, base)
        if res is None:
            return None
        return res, list(chosen)

    def best_over(self, hcs, bound: int):
        """Cheapest candidate over a list of cover subgraphs, strictly below ``bound``."""
        best = None
        for hc in hcs:
            if len(hc) >= bound:
                break
            while True:
                found = self.classes_search(hc, bound, strict=True)
                if found is None:
                    break
                bound = found[0]
                best = (found[0], hc, found[1])
        return best


def _cover_subsets(edges):
    for k in range(len(edges) + 1):
        yield from combinations(edges, k)


def _worker(args):
    inst, struct, hcs, bound = args
    sweep = _Sweep(inst, struct)
    best = sweep.best_over(hcs, bound)
    return (best[0] if best else None), sweep.candidates


def vc_solve(inst: Instance, workers: int = 1, stats: dict | None = None, cover=None):
    """Exact minimum subsetwise preserver by enumeration over a vertex cover.

    Returns (size, Preserver). The witness is the first optimal candidate in
    the fixed enumeration order, so it does not depend on ``workers``.
    """
    if isinstance(inst.terminals, Pairs):
        raise ValueError("vertex-cover solver handles subsetwise terminals only")
    g = inst.graph
    pairs = finite_pairs(inst)
    if not pairs:
        return 0, Preserver()
    terms = inst.terminals.vertices
    if cover is None:
        cover = min_vertex_cover(g)
    struct = neighborhood_classes(g, cover, terms)
    sweep = _Sweep(inst, struct)
    start = prune_minimal(inst, shortest_path_edge_union(g, pairs))
    bound = start.size + 1
    hcs = list(_cover_subsets(sweep.cover_edges))
    candidates = 0
    if workers > 1 and len(hcs) > 1:
        chunks = [hcs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            for val, cnt in ex.map(_worker, [(inst, struct, ch, bound) for ch in chunks]):
                candidates += cnt
                if val is not None:
                    bound = min(bound, val)
        opt = bound
    else:
        best = sweep.best_over(hcs, bound)
        opt = best[0]
    # canonical pass: first optimum in enumeration order
    witness = None
    for hc in hcs:
        if len(hc) > opt:
            break
        found = sweep.classes_search(hc, opt, strict=False)
        if found is not None:
            witness = sweep.edges_for(hc, found[1])
            break
    assert witness is not None and len(witness) == opt
    candidates += sweep.candidates
    if stats is not None:
        stats["cover"] = len(struct.cover)
        stats["classes"] = len(struct.classes)
        stats["candidates"] = candidates
        stats["cover_edges"] = len(sweep.cover_edges)
    return opt, Preserver(witness)


def check_structure(inst: Instance, witness, struct: CoverStructure) -> list[str]:
    """Structural violations of a witness: terminals of a class with different
    neighbourhoods, or more than one non-terminal of a class in use."""
    nb: dict[int, set[int]] = {}
    for u, v in Preserver(witness).edges:
        nb.setdefault(u, set()).add(v)
        nb.setdefault(v, set()).add(u)
    problems = []
    for c in struct.classes:
        sets = {frozenset(nb.get(t, ())) for t in c.terminals}
        if len(sets) > 1:
            problems.append(f"class {c.members}: terminal neighbourhoods differ")
        used = [v for v in c.members if v not in c.terminals and nb.get(v)]
        if len(used) > 1:
            problems.append(f"class {c.members}: {len(used)} non-terminals used")
        if c.terminals and used:
            problems.append(f"class {c.members}: non-terminal used beside terminals")
    return problems
