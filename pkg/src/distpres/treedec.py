"""Tree decompositions: computation, validation and conversion to nice form."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .graph import Edge, Graph, canon

EXACT_LIMIT = 12


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    tree: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, g: Graph) -> None:
        """Raise ValueError unless this is a tree decomposition of ``g``."""
        k = len(self.bags)
        if k == 0:
            raise ValueError("no bags")
        if len(self.tree) != k - 1:
            raise ValueError("decomposition tree needs exactly #bags-1 edges")
        nbr: list[list[int]] = [[] for _ in range(k)]
        for a, b in self.tree:
            if not (0 <= a < k and 0 <= b < k) or a == b:
                raise ValueError(f"bad tree edge ({a}, {b})")
            nbr[a].append(b)
            nbr[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            for w in nbr[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != k:
            raise ValueError("decomposition tree is disconnected")
        for b in self.bags:
            if any(not 0 <= v < g.n for v in b):
                raise ValueError("bag vertex out of range")
        for u, v in g.edges:
            if not any(u in b and v in b for b in self.bags):
                raise ValueError(f"edge ({u}, {v}) not covered by any bag")
        for v in range(g.n):
            holders = [i for i, b in enumerate(self.bags) if v in b]
            if not holders:
                raise ValueError(f"vertex {v} in no bag")
            hs = set(holders)
            reach = {holders[0]}
            stack = [holders[0]]
            while stack:
                for w in nbr[stack.pop()]:
                    if w in hs and w not in reach:
                        reach.add(w)
                        stack.append(w)
            if reach != hs:
                raise ValueError(f"bags containing {v} are not connected")


def _from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    pos = {v: i for i, v in enumerate(order)}
    nbrs = [set(a) for a in g.adj]
    bags: list[frozenset[int]] = []
    parent_vertex: list[int | None] = []
    for v in order:
        later = {w for w in nbrs[v] if pos[w] > pos[v]}
        bags.append(frozenset(later | {v}))
        for a in later:
            nbrs[a] |= later - {a}
        parent_vertex.append(min(later, key=pos.__getitem__) if later else None)
    if not bags:
        return TreeDecomposition([frozenset()], [])
    tree = []
    roots = []
    for i, p in enumerate(parent_vertex):
        if p is None:
            roots.append(i)
        else:
            tree.append((i, pos[p]))
    # components become one tree by chaining their roots
    tree += list(zip(roots, roots[1:]))
    return TreeDecomposition(bags, tree)


def _width_of(g: Graph, order: list[int]) -> int:
    return _from_order(g, order).width


def min_fill_order(g: Graph) -> list[int]:
    nbrs = [set(a) for a in g.adj]
    left = set(range(g.n))
    order = []
    while left:
        def fill(v):
            ns = list(nbrs[v])
            return sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in nbrs[a])
        v = min(left, key=lambda v: (fill(v), len(nbrs[v]), v))
        ns = nbrs[v]
        for a in ns:
            nbrs[a] |= ns - {a}
            nbrs[a].discard(v)
        left.discard(v)
        order.append(v)
    return order


def exact_order(g: Graph) -> list[int]:
    """Optimal elimination order by dynamic programming over vertex subsets.

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|), where Q(S, v)
    are the vertices outside S + v reachable from v through S.
    """
    n = g.n
    adjm = [sum(1 << w for w in g.adj[v]) for v in range(n)]

    def q_size(s: int, v: int) -> int:
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                u = low.bit_length() - 1
                f ^= low
                nb = adjm[u] & ~seen
                seen |= nb
                out |= nb & ~s
                nxt |= nb & s
            frontier = nxt
        return bin(out).count("1")

    @lru_cache(maxsize=None)
    def tw(s: int):
        if s == 0:
            return -1, ()
        best = None
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            sub, order = tw(s ^ low)
            val = max(sub, q_size(s ^ low, v))
            if best is None or val < best[0]:
                best = (val, order + (v,))
        return best

    _, order = tw((1 << n) - 1)
    tw.cache_clear()
    return list(order)


def decompose(g: Graph) -> TreeDecomposition:
    """Exact-width decomposition for n <= 12, min-fill heuristic beyond."""
    if g.n == 0:
        return TreeDecomposition([frozenset()], [])
    order = exact_order(g) if g.n <= EXACT_LIMIT else min_fill_order(g)
    td = _from_order(g, order)
    return td


# ---------------------------------------------------------------------------
# nice decompositions

LEAF, INTRO_VERTEX, INTRO_EDGE, FORGET, JOIN = "leaf", "introduce_vertex", "introduce_edge", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: Edge | None = None


@dataclass
class NiceTreeDecomposition:
    """Nodes are stored children-first, so index order is a bottom-up order."""

    nodes: list[NiceNode] = field(default_factory=list)
    root: int = -1

    @property
    def width(self) -> int:
        return max(len(t.bag) for t in self.nodes) - 1

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.nodes:
            out[t.kind] = out.get(t.kind, 0) + 1
        return out


def make_nice(td: TreeDecomposition, g: Graph) -> NiceTreeDecomposition:
    """Convert to nice form; each edge is introduced once, right below the
    forget node of whichever endpoint leaves first."""
    td.validate(g)
    k = len(td.bags)
    nbr: list[list[int]] = [[] for _ in range(k)]
    for a, b in td.tree:
        nbr[a].append(b)
        nbr[b].append(a)
    out = NiceTreeDecomposition()
    introduced: set[Edge] = set()
    gadj = [set(a) for a in g.adj]

    def add(node: NiceNode) -> int:
        out.nodes.append(node)
        return len(out.nodes) - 1

    def forget(top: int, bag: frozenset[int], v: int) -> tuple[int, frozenset[int]]:
        for w in sorted(gadj[v] & bag):
            e = canon(v, w)
            if e not in introduced:
                introduced.add(e)
                top = add(NiceNode(INTRO_EDGE, bag, (top,), edge=e))
        bag = bag - {v}
        return add(NiceNode(FORGET, bag, (top,), vertex=v)), bag

    def lift(top: int, bag: frozenset[int], target: frozenset[int]) -> int:
        for v in sorted(bag - target):
            top, bag = forget(top, bag, v)
        for v in sorted(target - bag):
            bag = bag | {v}
            top = add(NiceNode(INTRO_VERTEX, bag, (top,), vertex=v))
        return top

    # iterative post-order over the rooted decomposition tree
    parent = {0: None}
    order = [0]
    for i in order:
        for w in nbr[i]:
            if w not in parent:
                parent[w] = i
                order.append(w)
    built: dict[int, int] = {}
    for i in reversed(order):
        bag = td.bags[i]
        kids = [w for w in nbr[i] if parent.get(w) == i]
        tops = [lift(built[c], td.bags[c], bag) for c in kids]
        if not tops:
            tops = [lift(add(NiceNode(LEAF, frozenset())), frozenset(), bag)]
        top = tops[0]
        for other in tops[1:]:
            top = add(NiceNode(JOIN, bag, (top, other)))
        built[i] = top
    top = lift(built[0], td.bags[0], frozenset())
    out.root = top
    missing = set(g.edges) - introduced
    assert not missing, missing
    return out
