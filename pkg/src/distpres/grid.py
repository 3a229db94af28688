"""Full grid graphs, Hanan grids and the exact segment-subset solver."""
from __future__ import annotations

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .graph import UNREACHABLE, Edge, Graph, Instance, Pairs, Preserver, TerminalSpec, canon, pairs_of, verify_preserver

log = logging.getLogger(__name__)


class NotAGridError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")

    def vid(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise ValueError(f"({x},{y}) outside {self.width}x{self.height} grid")
        return y * self.width + x

    def xy(self, v: int) -> tuple[int, int]:
        return v % self.width, v // self.width

    @property
    def n(self) -> int:
        return self.width * self.height


def build_grid(spec: GridSpec) -> Graph:
    w, h = spec.width, spec.height
    edges = []
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x + 1 < w:
                edges.append((v, v + 1))
            if y + 1 < h:
                edges.append((v, v + w))
    return Graph.from_edges(w * h, edges)


@dataclass(frozen=True)
class Segment:
    start: tuple[int, int]
    end: tuple[int, int]
    edges: tuple[Edge, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def horizontal(self) -> bool:
        return self.start[1] == self.end[1]


@dataclass(frozen=True)
class HananGrid:
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    intersections: tuple[tuple[int, int], ...]
    segments: tuple[Segment, ...]


def _straight(spec: GridSpec, a: tuple[int, int], b: tuple[int, int]) -> tuple[Edge, ...]:
    (x0, y0), (x1, y1) = a, b
    if y0 == y1:
        return tuple(canon(spec.vid(x, y0), spec.vid(x + 1, y0)) for x in range(x0, x1))
    return tuple(canon(spec.vid(x0, y), spec.vid(x0, y + 1)) for y in range(y0, y1))


def hanan_grid(spec: GridSpec, terminals: Iterable[int]) -> HananGrid:
    """Rows and columns through terminals, cut at their crossings.

    Lines run between the extreme terminal coordinates only, which is the
    same as first trimming grid rows/columns outside the terminal bounding box.
    """
    pts = [spec.xy(v) for v in set(terminals)]
    if not pts:
        raise ValueError("empty terminal set")
    xs = tuple(sorted({x for x, _ in pts}))
    ys = tuple(sorted({y for _, y in pts}))
    segs = []
    for y in ys:
        for x0, x1 in zip(xs, xs[1:]):
            segs.append(Segment((x0, y), (x1, y), _straight(spec, (x0, y), (x1, y))))
    for x in xs:
        for y0, y1 in zip(ys, ys[1:]):
            segs.append(Segment((x, y0), (x, y1), _straight(spec, (x, y0), (x, y1))))
    return HananGrid(xs, ys, tuple(product(xs, ys)), tuple(segs))


class _SegmentSearch:
    """Include/exclude search over Hanan segments.

    A pair is served iff a monotone lattice path between its endpoints runs
    over chosen segments, so per pair the remaining cost is a min-cost path in
    the monotone DAG of its bounding box (chosen segments cost 0).
    """

    def __init__(self, hanan: HananGrid, pairs_xy):
        self.hanan = hanan
        segs = hanan.segments
        self.weight = [s.length for s in segs]
        self.key = [min(s.edges) for s in segs]
        at = {}
        for k, s in enumerate(segs):
            at[(s.start, s.end)] = k
            at[(s.end, s.start)] = k
        xs, ys = hanan.xs, hanan.ys
        xi = {x: i for i, x in enumerate(xs)}
        yi = {y: j for j, y in enumerate(ys)}
        self.dags = []
        count = [0] * len(segs)
        for (sx, sy), (tx, ty) in pairs_xy:
            i0, j0, i1, j1 = xi[sx], yi[sy], xi[tx], yi[ty]
            di = 1 if i1 >= i0 else -1
            dj = 1 if j1 >= j0 else -1
            na, nb = abs(i1 - i0) + 1, abs(j1 - j0) + 1
            # box cells get local ids a*nb + b; arcs sorted by a + b are topological
            arcs = []
            for a in range(na):
                for b in range(nb):
                    i, j = i0 + di * a, j0 + dj * b
                    cell = (xs[i], ys[j])
                    if a + 1 < na:
                        arcs.append((a + b, a * nb + b, (a + 1) * nb + b, at[(cell, (xs[i + di], ys[j]))]))
                    if b + 1 < nb:
                        arcs.append((a + b, a * nb + b, a * nb + b + 1, at[(cell, (xs[i], ys[j + dj]))]))
            arcs.sort(key=lambda r: r[0])
            dag = [(c, d, k) for _, c, d, k in arcs]
            self.dags.append(((sx, sy), (tx, ty), dag, na * nb))
            for k in {a[2] for a in dag}:
                count[k] += 1
        self.pair_count = count
        self.status = [0] * len(segs)
        self.nodes = 0

    def analyse(self):
        status, weight = self.status, self.weight
        useful: set[int] = set()
        forced: set[int] = set()
        residual = []
        for s, t, dag, size in self.dags:
            if s == t:
                continue
            fwd = [0] * size
            cost = [UNREACHABLE] * size
            fwd[0] = 1
            cost[0] = 0
            for a, b, k in dag:
                st = status[k]
                fa = fwd[a]
                if st < 0 or not fa:
                    continue
                fwd[b] += fa
                c = cost[a] + (0 if st > 0 else weight[k])
                if c < cost[b]:
                    cost[b] = c
            last = size - 1
            total = fwd[last]
            if not total:
                return None
            bwd = [0] * size
            bwd[last] = 1
            pu = set()
            for a, b, k in reversed(dag):
                st = status[k]
                gb = bwd[b]
                if st < 0 or not gb or not fwd[a]:
                    continue
                bwd[a] += gb
                pu.add(k)
                if st == 0 and fwd[a] * gb == total:
                    forced.add(k)
            useful |= pu
            residual.append((cost[last], pu))
        return useful, forced, residual

    def lower_bound(self, residual) -> int:
        best = packed = 0
        used: set[int] = set()
        for r, pu in sorted(residual, key=lambda x: -x[0]):
            if r == 0:
                break
            best = max(best, r)
            open_ = {k for k in pu if self.status[k] == 0}
            if used.isdisjoint(open_):
                packed += r
                used |= open_
        return max(best, packed)

    def run(self, order, bound: int, strict: bool, fixed=()):
        """Include-first DFS along ``order`` below the ``fixed`` decisions."""
        status, weight = self.status, self.weight
        best = None
        limit = bound

        def dfs(chosen_w):
            nonlocal best, limit
            self.nodes += 1
            res = self.analyse()
            if res is None:
                return False
            useful, forced, residual = res
            if any(status[k] > 0 and k not in useful for k in range(len(status))):
                return False
            trail = []
            for k in forced:
                status[k] = 1
                chosen_w += weight[k]
                trail.append(k)
            for k in range(len(status)):
                if status[k] == 0 and k not in useful:
                    status[k] = -1
                    trail.append(k)
            try:
                if forced:
                    residual = self.analyse()[2]
                lb = chosen_w + self.lower_bound(residual)
                if lb > limit or (strict and lb >= limit):
                    return False
                if all(r == 0 for r, _ in residual):
                    best = (chosen_w, [k for k in range(len(status)) if status[k] > 0])
                    if strict:
                        limit = chosen_w
                        return False
                    return True
                k = next(k for k in order if status[k] == 0)
                status[k] = 1
                done = dfs(chosen_w + weight[k])
                status[k] = 0
                if done:
                    return True
                status[k] = -1
                done = dfs(chosen_w)
                status[k] = 0
                return done
            finally:
                for k in trail:
                    status[k] = 0

        for k, v in fixed:
            status[k] = v
        pre = sum(weight[k] for k, v in fixed if v > 0)
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20 * len(status) + 1000))
        try:
            dfs(pre)
        finally:
            sys.setrecursionlimit(old)
            for k, _ in fixed:
                status[k] = 0
        return best


def _greedy_segments(search: _SegmentSearch, hanan: HananGrid) -> set[int]:
    """Per pair, the cheaper of its two L-shaped Hanan paths given what is already taken."""
    at = {}
    for k, s in enumerate(hanan.segments):
        at[(s.start, s.end)] = k
        at[(s.end, s.start)] = k
    xs, ys = hanan.xs, hanan.ys
    taken: set[int] = set()
    for (sx, sy), (tx, ty), _, _ in search.dags:
        options = []
        for corner in ((tx, sy), (sx, ty)):
            segs = set()
            for a, b in (((sx, sy), corner), (corner, (tx, ty))):
                if a[1] == b[1]:
                    line = [x for x in xs if min(a[0], b[0]) <= x <= max(a[0], b[0])]
                    pts = [(x, a[1]) for x in line]
                else:
                    line = [y for y in ys if min(a[1], b[1]) <= y <= max(a[1], b[1])]
                    pts = [(a[0], y) for y in line]
                segs |= {at[(p, q)] for p, q in zip(pts, pts[1:])}
            options.append((sum(search.weight[k] for k in segs - taken), sorted(segs), segs))
        taken |= min(options, key=lambda o: o[:2])[2]
    return taken


def _band(args):
    hanan, pairs_xy, order, bound, fixed = args
    search = _SegmentSearch(hanan, pairs_xy)
    return search.run(order, bound, strict=True, fixed=fixed), search.nodes


def solve_grid_pdp(spec: GridSpec, pairs, graph: Graph | None = None, workers: int = 1,
                   stats: dict | None = None, canonical: bool = True) -> tuple[int, Preserver]:
    """Minimum preserver on a full grid, searching subsets of Hanan segments.

    ``pairs`` is a TerminalSpec or an iterable of vertex-id pairs. Valid only
    when the host graph is the complete ``spec`` grid; pass ``graph`` to have
    that checked. The witness is the lexicographically smallest optimal edge
    set made of whole segments; ``canonical=False`` skips that second pass and
    returns whichever optimum the first search met.
    """
    if graph is not None and graph != build_grid(spec):
        raise NotAGridError("instance graph is not the full grid")
    plist = pairs_of(pairs) if isinstance(pairs, TerminalSpec) else list(Pairs(pairs).pairs)
    if not plist:
        return 0, Preserver()
    terminals = {v for p in plist for v in p}
    hanan = hanan_grid(spec, terminals)
    pairs_xy = [(spec.xy(a), spec.xy(b)) for a, b in plist]
    search = _SegmentSearch(hanan, pairs_xy)
    greedy = _greedy_segments(search, hanan)
    upper = sum(search.weight[k] for k in greedy)
    heur = sorted(range(len(hanan.segments)),
                  key=lambda k: (-search.pair_count[k], -search.weight[k], search.key[k]))
    opt = upper
    best_segs = sorted(greedy)
    if workers <= 1:
        found = search.run(heur, upper, strict=True)
        if found is not None:
            opt, best_segs = found
    else:
        # disjoint subtrees: all include/exclude patterns of the first few segments
        depth = min(len(heur), max(1, (workers - 1).bit_length() + 1))
        jobs = [(hanan, pairs_xy, heur, upper,
                 tuple(zip(heur[:depth], bits)))
                for bits in product((1, -1), repeat=depth)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for found, nodes in ex.map(_band, jobs):
                search.nodes += nodes
                if found is not None and found[0] < opt:
                    opt, best_segs = found
    if canonical:
        canon_order = sorted(range(len(hanan.segments)), key=lambda k: search.key[k])
        found = search.run(canon_order, opt, strict=False)
        assert found is not None and found[0] == opt
        best_segs = found[1]
    edges = [e for k in best_segs for e in hanan.segments[k].edges]
    witness = Preserver(edges)
    inst = Instance(graph if graph is not None else build_grid(spec), Pairs(plist))
    assert verify_preserver(inst, witness)
    if stats is not None:
        stats["nodes"] = search.nodes
        stats["segments"] = len(hanan.segments)
        stats["greedy_upper"] = upper
    return opt, witness


def grid_symmetries(spec: GridSpec):
    """The 8 grid symmetries as (new spec, vertex map) pairs."""
    w, h = spec.width, spec.height
    maps = [
        (lambda x, y: (x, y), False),
        (lambda x, y: (w - 1 - x, y), False),
        (lambda x, y: (x, h - 1 - y), False),
        (lambda x, y: (w - 1 - x, h - 1 - y), False),
        (lambda x, y: (y, x), True),
        (lambda x, y: (h - 1 - y, x), True),
        (lambda x, y: (y, w - 1 - x), True),
        (lambda x, y: (h - 1 - y, w - 1 - x), True),
    ]
    out = []
    for f, swap in maps:
        new = GridSpec(h, w) if swap else spec
        out.append((new, {spec.vid(x, y): new.vid(*f(x, y)) for y in range(h) for x in range(w)}))
    return out
