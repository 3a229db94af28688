"""Instance generators for the hardness reductions, plus tiny exact solvers
for their source problems so that each reduction can be checked end to end.

Every generator returns a ``Generated`` record that unpacks as
``(instance, budget)``; extra fields carry vertex labels and a provenance
line for instance files.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

from .graph import Edge, Graph, Instance, Pairs, Subset, canon
from .grid import GridSpec, build_grid

INF = float("inf")


# ---------------------------------------------------------------------------
# source problems


@dataclass(frozen=True)
class MccInstance:
    """Multicolored clique: pick one vertex per class, all pairwise adjacent."""

    n: int
    classes: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen = sorted(v for c in self.classes for v in c)
        if seen != list(range(self.n)):
            raise ValueError("classes must partition 0..n-1")
        cls = self.class_of()
        for u, v in self.edges:
            if cls[u] == cls[v]:
                raise ValueError(f"edge ({u}, {v}) inside class {cls[u]}")

    @property
    def k(self) -> int:
        return len(self.classes)

    def class_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}


@dataclass(frozen=True)
class BmccInstance:
    """Bipartite multicolored biclique. Classes are padded to a common size p."""

    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]  # (l, r) with l on the left side

    def __post_init__(self):
        if len(self.left) != len(self.right) or not self.left:
            raise ValueError("need k >= 1 classes on each side")
        ls = [v for c in self.left for v in c]
        rs = [v for c in self.right for v in c]
        if len(set(ls + rs)) != len(ls) + len(rs):
            raise ValueError("classes overlap")
        lset = set(ls)
        rset = set(rs)
        for a, b in self.edges:
            if a not in lset or b not in rset:
                raise ValueError(f"edge ({a}, {b}) is not left-right")

    @property
    def k(self) -> int:
        return len(self.left)

    @property
    def p(self) -> int:
        return max(len(c) for c in self.left + self.right)

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.left + self.right)

    def padded(self) -> "BmccInstance":
        """Add isolated dummy vertices so every class has exactly p members."""
        p = self.p
        nxt = max(v for c in self.left + self.right for v in c) + 1
        sides = []
        for side in (self.left, self.right):
            out = []
            for c in side:
                extra = tuple(range(nxt, nxt + p - len(c)))
                nxt += len(extra)
                out.append(tuple(c) + extra)
            sides.append(tuple(out))
        return BmccInstance(sides[0], sides[1], self.edges)


@dataclass(frozen=True)
class Mwc3Instance:
    n: int
    edges: tuple[Edge, ...]
    terminals: tuple[int, int, int]
    k: int

    def __post_init__(self):
        if len(set(self.terminals)) != 3:
            raise ValueError("three distinct terminals required")
        Graph.from_edges(self.n, self.edges)


@dataclass(frozen=True)
class AlcInstance:
    """Agreement list colouring: lists over colours {1, 2, 3}."""

    n: int
    edges: tuple[Edge, ...]
    lists: tuple[frozenset[int], ...]
    k: int

    def __post_init__(self):
        if len(self.lists) != self.n:
            raise ValueError("one colour list per vertex")
        for i, lst in enumerate(self.lists):
            if not lst or not lst <= {1, 2, 3}:
                raise ValueError(f"list of vertex {i} must be a nonempty subset of {{1,2,3}}")
        Graph.from_edges(self.n, self.edges)


@dataclass(frozen=True)
class RsaInstance:
    points: tuple[tuple[int, int], ...]
    k: int = 0

    def __post_init__(self):
        for x, y in self.points:
            if x < 0 or y < 0:
                raise ValueError(f"point ({x}, {y}) outside the first quadrant")


@dataclass(frozen=True)
class GadgetParams:
    alpha: int
    ell: int
    delta: int

    def __post_init__(self):
        if not (self.alpha > 5 and self.ell > self.alpha and self.delta > self.ell):
            raise ValueError(f"need alpha > 5, ell > alpha, delta > ell; got {self}")

    @classmethod
    def default(cls, n: int, k: int) -> "GadgetParams":
        return cls(8, 6 * (n + k) + 8, 12 * (n + k) + 16)


@dataclass
class Generated:
    instance: Instance
    budget: int
    labels: dict[str, int] = field(default_factory=dict)
    provenance: str = ""
    # source is a No-instance for a reason visible from the construction alone
    certified_no: bool = False
    grid: GridSpec | None = None

    def __iter__(self):
        yield self.instance
        yield self.budget


def digest(src) -> str:
    return hashlib.sha256(repr(src).encode()).hexdigest()[:16]


def _provenance(name: str, src, **params) -> str:
    extra = " ".join(f"{k}={v}" for k, v in params.items())
    return f"generated by {name} from source sha256:{digest(src)}" + (f" {extra}" if extra else "")


def _instance(n: int, edges, terminals, budget: int) -> Instance:
    g = Graph.from_edges(n, edges)
    # a budget above m says nothing more than m does
    return Instance(g, terminals, min(budget, g.m))


# ---------------------------------------------------------------------------
# generators


def mcc_to_sdp(src: MccInstance) -> Generated:
    """Copy the graph, add terminal t_i adjacent to all of class i. Budget k + C(k, 2).

    Vertex v keeps id v; t_i gets id n + i.
    """
    n, k = src.n, src.k
    edges = list(src.edges)
    for i, c in enumerate(src.classes):
        edges += [(n + i, v) for v in c]
    cls = src.class_of()
    linked = {canon(cls[u], cls[v]) for u, v in src.edges}
    no = any((i, j) not in linked for i, j in combinations(range(k), 2))
    budget = k + comb(k, 2)
    inst = _instance(n + k, edges, Subset(range(n, n + k)), budget)
    labels = {f"t{i}": n + i for i in range(k)}
    return Generated(inst, budget, labels, _provenance("mcc", src, k=k), certified_no=no)


def rsa_to_pdp(src: RsaInstance) -> Generated:
    """Grid spanning the points, one pair (origin, point) per point. Budget k."""
    pts = src.points
    if not pts:
        raise ValueError("no points")
    if (0, 0) in pts:
        raise ValueError("point at the origin")
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    spec = GridSpec(max(x for x, _ in pts) + 1, max(y for _, y in pts) + 1)
    g = build_grid(spec)
    pairs = Pairs((spec.vid(0, 0), spec.vid(x, y)) for x, y in pts)
    inst = Instance(g, pairs, min(src.k, g.m))
    return Generated(inst, src.k, {}, _provenance("rsa", src, width=spec.width, height=spec.height), grid=spec)


def mwc3_to_alc(src: Mwc3Instance) -> tuple[AlcInstance, int]:
    """Clique of size m per vertex, one vertex per edge seeing both end cliques.

    Clique K_v is ids v*m .. v*m+m-1, the vertex of edge e is n*m + e.
    Returns (ALC instance, (n+1)m + k).
    """
    g = Graph.from_edges(src.n, src.edges)
    n, m = g.n, g.m
    if n < 3:
        raise ValueError("need at least 3 vertices")
    if not _connected(g):
        raise ValueError("source graph must be connected")
    edges = []
    for v in range(n):
        edges += [(v * m + a, v * m + b) for a, b in combinations(range(m), 2)]
    for e, (u, v) in enumerate(g.edges):
        w = n * m + e
        edges += [(w, u * m + j) for j in range(m)]
        edges += [(w, v * m + j) for j in range(m)]
    lists = [frozenset({1, 2, 3})] * ((n + 1) * m)
    for i, s in enumerate(src.terminals, start=1):
        for j in range(m):
            lists[s * m + j] = frozenset({i})
    budget = (n + 1) * m + src.k
    return AlcInstance((n + 1) * m, tuple(sorted(edges)), tuple(lists), budget), budget


def alc_to_vc3bipdp(src: AlcInstance) -> Generated:
    """Colour vertices a_1..a_3 (ids 0..2), vertex v becomes 3+v adjacent to its
    allowed colours, one terminal pair per edge. Budget k."""
    edges = [(c - 1, 3 + v) for v, lst in enumerate(src.lists) for c in sorted(lst)]
    pairs = Pairs((3 + u, 3 + v) for u, v in src.edges)
    no = any(not (src.lists[u] & src.lists[v]) for u, v in src.edges)
    inst = _instance(3 + src.n, edges, pairs, src.k)
    labels = {"a1": 0, "a2": 1, "a3": 2}
    return Generated(inst, src.k, labels, _provenance("alc", src), certified_no=no)


def bmcc_to_sdp_core(src: BmccInstance, params: GadgetParams | None = None) -> Generated:
    """Planar SDP instance with 4k endpoint terminals encoding a biclique question.

    One vertical path of length ell per left vertex, one horizontal path per
    right vertex; every horizontal path meets every vertical path. At an edge
    the two share two consecutive edges, at a non-edge a single vertex; either
    way the horizontal path spends 5 edges per crossing. Paths of length
    delta tie path ends to their class endpoints, and four paths of length
    2*delta join the connector vertices into a cycle.
    """
    src = src.padded()
    k, p, n = src.k, src.p, src.n
    if params is None:
        params = GadgetParams.default(n, k)
    a, ell, delta = params.alpha, params.ell, params.delta
    kp = k * p
    if ell < max((kp + 1) * a + 2 * kp, 2 * a + 5 * kp):
        raise ValueError(f"ell={ell} too short for {kp} crossings with alpha={a}")

    labels: dict[str, int] = {}
    edges: set[Edge] = set()
    count = 0

    def new(name: str | None = None) -> int:
        nonlocal count
        count += 1
        if name is not None:
            labels[name] = count - 1
        return count - 1

    def path(u: int, v: int, length: int) -> None:
        prev = u
        for _ in range(length - 1):
            cur = new()
            edges.add(canon(prev, cur))
            prev = cur
        edges.add(canon(prev, v))

    def chain(seq) -> None:
        for x, y in zip(seq, seq[1:]):
            edges.add(canon(x, y))

    conn = {side: new(f"c_{side}") for side in ("top", "left", "bot", "right")}
    for s, t in (("top", "left"), ("left", "bot"), ("bot", "right"), ("right", "top")):
        path(conn[s], conn[t], 2 * delta)

    verts = [v for c in src.left for v in c]
    hors = [u for c in src.right for u in c]
    adjacent = set(src.edges)
    terminals = []
    for i in range(k):
        lt, lb = new(f"l_top_{i}"), new(f"l_bot_{i}")
        rl, rr = new(f"r_left_{i}"), new(f"r_right_{i}")
        terminals += [lt, lb, rl, rr]
        edges |= {canon(conn["top"], lt), canon(conn["bot"], lb), canon(conn["left"], rl), canon(conn["right"], rr)}
        for v in src.left[i]:
            path(lt, new(f"w_top_{v}"), delta)
            path(new(f"w_bot_{v}"), lb, delta)
        for u in src.right[i]:
            path(rl, new(f"w_left_{u}"), delta)
            path(new(f"w_right_{u}"), rr, delta)

    # vertical paths, top to bottom; z[(u, v)] = (z1, z2, z3), z1 lowest
    z: dict[tuple[int, int], tuple[int, int, int]] = {}
    for v in verts:
        seq = [labels[f"w_top_{v}"]]
        used = 0
        for u in hors:
            # alpha edges from the path start or the previous crossing
            seq += [new() for _ in range(a - 1)]
            z3, z2, z1 = new(f"z3_{u}_{v}"), new(f"z2_{u}_{v}"), new(f"z1_{u}_{v}")
            seq += [z3, z2, z1]
            used += a + 2
            z[(u, v)] = (z1, z2, z3)
        rest = ell - used
        seq += [new() for _ in range(rest - 1)] + [labels[f"w_bot_{v}"]]
        chain(seq)
    # horizontal paths, left to right
    for u in hors:
        seq = [labels[f"w_left_{u}"]] + [new() for _ in range(a)]
        for v in verts:
            z1, z2, z3 = z[(u, v)]
            if (v, u) in adjacent:
                seq += [z1, z2, z3, new(), new()]
            else:
                seq += [new(), new(), z2, new(), new()]
        rest = ell - a - 5 * kp
        seq += [new() for _ in range(rest - 1)] + [labels[f"w_right_{u}"]]
        chain(seq)

    budget = 8 * delta + 4 * k + 4 * k * delta + 2 * k * ell - 2 * k * k
    inst = _instance(count, sorted(edges), Subset(terminals), budget)
    return Generated(inst, budget, labels, _provenance("bmcc", src, alpha=a, ell=ell, delta=delta))


# ---------------------------------------------------------------------------
# exact solvers for the source problems (tiny inputs only)

SOURCE_CAP = 12


def _connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        for w in g.adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def mcc_brute(src: MccInstance) -> bool:
    if src.n > 3 * SOURCE_CAP:
        raise ValueError("instance too large for exhaustive search")
    es = {canon(u, v) for u, v in src.edges}
    for pick in product(*src.classes):
        if all(canon(a, b) in es for a, b in combinations(pick, 2)):
            return True
    return False


def bmcc_brute(src: BmccInstance) -> bool:
    if src.n > 3 * SOURCE_CAP:
        raise ValueError("instance too large for exhaustive search")
    es = set(src.edges)
    # a left choice is good for right class j if some member of R_j sees all of it
    for pick in product(*src.left):
        if all(any(all((l, r) in es for l in pick) for r in c) for c in src.right):
            return True
    return False


def mwc3_brute(src: Mwc3Instance) -> int:
    """Fewest edges whose removal separates the three terminals pairwise."""
    if len(src.edges) > 2 * SOURCE_CAP:
        raise ValueError("instance too large for exhaustive search")
    edges = list(src.edges)
    s = src.terminals
    for size in range(len(edges) + 1):
        for cut in combinations(range(len(edges)), size):
            gone = set(cut)
            parent = list(range(src.n))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for i, (u, v) in enumerate(edges):
                if i not in gone:
                    parent[find(u)] = find(v)
            if len({find(t) for t in s}) == 3:
                return size
    raise AssertionError("removing every edge always separates the terminals")


def alc_brute(src: AlcInstance) -> float:
    """Minimum total list size of a valid assignment, ``inf`` if none exists."""
    if src.n > SOURCE_CAP:
        raise ValueError("instance too large for exhaustive search")
    g = Graph.from_edges(src.n, src.edges)
    options = [
        sorted((frozenset(c) for r in range(1, len(lst) + 1) for c in combinations(sorted(lst), r)), key=len)
        for lst in src.lists
    ]
    best = INF
    chosen: list[frozenset[int]] = []

    def rec(v: int, cost: int):
        nonlocal best
        if cost + (src.n - v) >= best:
            return
        if v == src.n:
            best = cost
            return
        for x in options[v]:
            if all(chosen[w] & x for w in g.adj[v] if w < v):
                chosen.append(x)
                rec(v + 1, cost + len(x))
                chosen.pop()

    rec(0, 0)
    return best


def rsa_brute(src: RsaInstance) -> int:
    """Minimum arborescence length by Steiner-tree DP on the up/right grid DAG."""
    pts = sorted(set(src.points) - {(0, 0)})
    if len(pts) > 5:
        raise ValueError("instance too large for exhaustive search")
    if not pts:
        return 0
    w = max(x for x, _ in pts) + 1
    h = max(y for _, y in pts) + 1
    cells = [(x, y) for x in range(w) for y in range(h)]
    t = len(pts)
    full = (1 << t) - 1
    # best[mask][(x, y)]: cheapest monotone tree rooted at (x, y) reaching pts in mask
    best = [dict.fromkeys(cells, INF) for _ in range(full + 1)]
    for i, (px, py) in enumerate(pts):
        for x, y in cells:
            if x <= px and y <= py:
                best[1 << i][(x, y)] = (px - x) + (py - y)
    order = sorted(cells, key=lambda c: -(c[0] + c[1]))
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        row = best[mask]
        for c in order:  # successors come first
            val = INF
            sub = (mask - 1) & mask
            while sub:
                val = min(val, best[sub][c] + best[mask ^ sub][c])
                sub = (sub - 1) & mask
            x, y = c
            for nxt in ((x + 1, y), (x, y + 1)):
                if nxt in row:
                    val = min(val, 1 + row[nxt])
            row[c] = val
    return int(best[full][(0, 0)])


# ---------------------------------------------------------------------------
# source text formats


def _ints(tokens) -> list[int]:
    return [int(t) for t in tokens]


def parse_source(text: str):
    """Parse one of the ``mcc``/``bmcc``/``mwc3``/``alc``/``rsa`` formats (see README)."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if not lines:
        raise ValueError("empty source file")
    head, rest = lines[0], lines[1:]
    kind = head[0]
    edges = [tuple(_ints(r[1:3])) for r in rest if r[0] == "e"]
    if kind == "mcc":
        n = int(head[1])
        classes = [tuple(_ints(r[2:])) for r in sorted((r for r in rest if r[0] == "c"), key=lambda r: int(r[1]))]
        return MccInstance(n, tuple(classes), tuple(edges))
    if kind == "bmcc":
        left = [tuple(_ints(r[2:])) for r in sorted((r for r in rest if r[0] == "L"), key=lambda r: int(r[1]))]
        right = [tuple(_ints(r[2:])) for r in sorted((r for r in rest if r[0] == "R"), key=lambda r: int(r[1]))]
        return BmccInstance(tuple(left), tuple(right), tuple(edges))
    if kind == "mwc3":
        n, k = int(head[1]), int(head[2])
        s = [tuple(_ints(r[1:4])) for r in rest if r[0] == "s"]
        if len(s) != 1:
            raise ValueError("mwc3 needs exactly one 's a b c' line")
        return Mwc3Instance(n, tuple(edges), s[0], k)
    if kind == "alc":
        n, k = int(head[1]), int(head[2])
        lists: list[frozenset[int] | None] = [None] * n
        for r in rest:
            if r[0] == "l":
                lists[int(r[1])] = frozenset(_ints(r[2:]))
        if any(x is None for x in lists):
            raise ValueError("every vertex needs an 'l' line")
        return AlcInstance(n, tuple(edges), tuple(lists), k)
    if kind == "rsa":
        k = int(head[1]) if len(head) > 1 else 0
        pts = tuple(tuple(_ints(r[1:3])) for r in rest if r[0] == "p")
        return RsaInstance(pts, k)
    raise ValueError(f"unknown source kind {kind!r}")


def format_source(src) -> str:
    out: list[str] = []
    if isinstance(src, MccInstance):
        out.append(f"mcc {src.n} {src.k}")
        out += [f"c {i} " + " ".join(map(str, c)) for i, c in enumerate(src.classes)]
    elif isinstance(src, BmccInstance):
        out.append(f"bmcc {src.k} {src.p}")
        out += [f"L {i} " + " ".join(map(str, c)) for i, c in enumerate(src.left)]
        out += [f"R {i} " + " ".join(map(str, c)) for i, c in enumerate(src.right)]
    elif isinstance(src, Mwc3Instance):
        out.append(f"mwc3 {src.n} {src.k}")
        out.append("s " + " ".join(map(str, src.terminals)))
    elif isinstance(src, AlcInstance):
        out.append(f"alc {src.n} {src.k}")
        out += [f"l {v} " + " ".join(map(str, sorted(l))) for v, l in enumerate(src.lists)]
    elif isinstance(src, RsaInstance):
        out.append(f"rsa {src.k}")
        out += [f"p {x} {y}" for x, y in src.points]
        return "\n".join(out) + "\n"
    else:
        raise TypeError(f"not a source instance: {type(src).__name__}")
    out += [f"e {u} {v}" for u, v in src.edges]
    return "\n".join(out) + "\n"
