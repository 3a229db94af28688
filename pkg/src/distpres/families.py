"""Seeded instance families for sweeps, benchmarks and the acceptance checks."""
import random
from itertools import combinations

from .graph import Graph, Instance, Pairs, Subset
from .reductions import MccInstance, Mwc3Instance

SWEEP_SEED = 20240611


def small_instance(rng: random.Random, max_n=10, max_m=20, max_t=4) -> Instance:
    n = rng.randint(2, max_n)
    allp = list(combinations(range(n), 2))
    g = Graph.from_edges(n, rng.sample(allp, rng.randint(0, min(max_m, len(allp)))))
    if rng.random() < 0.5:
        terms = Subset(rng.sample(range(n), min(n, rng.randint(1, max_t))))
    else:
        terms = Pairs(rng.sample(allp, min(len(allp), rng.randint(1, max_t))))
    return Instance(g, terms)


def sweep_corpus(count=240, seed=SWEEP_SEED) -> list[Instance]:
    rng = random.Random(seed)
    return [small_instance(rng) for _ in range(count)]


def mcc_family(count=60, seed=7, linked=True) -> list[MccInstance]:
    """With ``linked`` every two classes share at least one edge; otherwise the
    source is a No-instance visible from the class graph alone."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(2, 3)
        n = rng.randint(k, 9)
        verts = list(range(n))
        rng.shuffle(verts)
        cuts = sorted(rng.sample(range(1, n), k - 1)) + [n]
        parts, prev = [], 0
        for c in cuts:
            parts.append(tuple(sorted(verts[prev:c])))
            prev = c
        cls = {v: i for i, c in enumerate(parts) for v in c}
        cross = [(u, v) for u, v in combinations(range(n), 2) if cls[u] != cls[v]]
        edges = set(rng.sample(cross, rng.randint(0, len(cross) // 2)))
        if linked:
            for i, j in combinations(range(k), 2):
                if not any({cls[u], cls[v]} == {i, j} for u, v in edges):
                    edges.add(tuple(sorted((rng.choice(parts[i]), rng.choice(parts[j])))))
        edges = tuple(sorted(edges))
        out.append(MccInstance(n, tuple(parts), edges))
    return out


def mwc3_family(count=32, seed=11, extra=2) -> list[Mwc3Instance]:
    """Connected graphs on 3..6 vertices: a random tree plus up to ``extra`` edges."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(3, 6)
        es = {(rng.randrange(v), v) for v in range(1, n)}
        rest = [e for e in combinations(range(n), 2) if e not in es]
        es |= set(rng.sample(rest, rng.randint(0, min(extra, len(rest)))))
        out.append(Mwc3Instance(n, tuple(sorted(es)), tuple(rng.sample(range(n), 3)), 0))
    return out


def rsa_point_sets(size=6, max_points=4):
    """Point sets in the size x size box minus the origin, one per transpose orbit."""
    pts = [(x, y) for x in range(size) for y in range(size) if (x, y) != (0, 0)]
    out = []
    for r in range(1, max_points + 1):
        for c in combinations(pts, r):
            t = tuple(sorted((y, x) for x, y in c))
            if c <= t:
                out.append(c)
    return out
