"""Property tests over small random graphs."""
from itertools import combinations

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from distpres.graph import Graph, Instance, Pairs, Subset, all_pairs_distances, prune_minimal, shortest_path_edge_union, verify_preserver
from distpres.grid import GridSpec, grid_symmetries, solve_grid_pdp
from distpres.io import format_instance, parse_instance
from distpres.oracle import bb_min, brute_force_min
from distpres.twdp import edge_closure, realized_sigma, run_dp
from distpres.vc import check_structure, min_vertex_cover, neighborhood_classes, reduced_instance, vc_solve

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    allp = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(allp), unique=True, max_size=min(16, len(allp))))
    return Graph.from_edges(n, edges)


@st.composite
def subset_instances(draw, max_n=8):
    g = draw(graphs(max_n))
    s = draw(st.lists(st.integers(0, g.n - 1), unique=True, min_size=1, max_size=4))
    return Instance(g, Subset(s))


@st.composite
def instances(draw, max_n=8):
    if draw(st.booleans()):
        return draw(subset_instances(max_n))
    g = draw(graphs(max_n))
    allp = list(combinations(range(g.n), 2))
    ps = draw(st.lists(st.sampled_from(allp), unique=True, min_size=1, max_size=4))
    return Instance(g, Pairs(ps))


@FAST
@given(instances())
def test_full_graph_and_sp_union_are_preservers(inst):
    g = inst.graph
    assert verify_preserver(inst, g.edges)
    assert verify_preserver(inst, shortest_path_edge_union(g, inst.pairs))


@FAST
@given(instances())
def test_prune_is_one_minimal(inst):
    h = prune_minimal(inst, inst.graph.edges)
    assert verify_preserver(inst, h.edges)
    for e in h.edges:
        assert not verify_preserver(inst, h.edges - {e})


@FAST
@given(subset_instances())
def test_subset_equals_all_pairs(inst):
    as_pairs = Instance(inst.graph, Pairs(inst.pairs))
    assert bb_min(inst)[0] == bb_min(as_pairs)[0]


@FAST
@given(instances())
def test_optimum_monotone_in_pairs(inst):
    assume(len(inst.pairs) > 1)
    fewer = Instance(inst.graph, Pairs(inst.pairs[1:]))
    assert bb_min(fewer)[0] <= bb_min(inst)[0]


@FAST
@given(instances(), st.data())
def test_edge_closure_matches_bfs(inst, data):
    """Adding one edge to a subgraph: closure of the old relation equals the new relation."""
    g = inst.graph
    assume(g.m > 0)
    sub = data.draw(st.lists(st.sampled_from(g.edges), unique=True))
    e = data.draw(st.sampled_from(g.edges))
    scope = tuple(range(g.n))
    dist = all_pairs_distances(g, scope).rows
    before = realized_sigma(g, sub, scope, g.n)
    after = realized_sigma(g, set(sub) | {e}, scope, g.n)
    s = edge_closure(before, e[0], e[1], scope, dist, g.n)
    assert s == after
    assert edge_closure(s, e[0], e[1], scope, dist, g.n) == s


@st.composite
def sparse_instances(draw):
    g = draw(graphs(6))
    assume(g.m <= 8)
    if draw(st.booleans()):
        return Instance(g, Subset(draw(st.lists(st.integers(0, g.n - 1), unique=True, min_size=1, max_size=3))))
    allp = list(combinations(range(g.n), 2))
    return Instance(g, Pairs(draw(st.lists(st.sampled_from(allp), unique=True, min_size=1, max_size=3))))


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(sparse_instances())
def test_dp_tables_without_pruning_are_exact(inst):
    """With forget pruning off, each table holds exactly the realizable relations,
    each with the size of the lightest realizing subset of the subtree's edges."""
    g = inst.graph
    run = run_dp(inst, prune_forget=False)
    below: list[list] = []
    for t, node in enumerate(run.ntd.nodes):
        es = [e for c in node.children for e in below[c]]
        if node.kind == "introduce_edge":
            es.append(node.edge)
        below.append(es)
        best: dict[int, int] = {}
        for k in range(len(es) + 1):
            for sub in combinations(es, k):
                s = realized_sigma(g, sub, run.scopes[t], g.n)
                best.setdefault(s, k)
        assert {s: w for s, (w, _) in run.tables[t].items()} == best
    assert run.optimum == brute_force_min(inst)[0]


@FAST
@given(subset_instances(max_n=9))
def test_vc_structure_and_reduction(inst):
    g = inst.graph
    cover = min_vertex_cover(g)
    struct = neighborhood_classes(g, cover, inst.terminals.vertices)
    size, h = vc_solve(inst)
    assert not check_structure(inst, h.edges, struct)
    assert size == brute_force_min(reduced_instance(inst, struct))[0] == brute_force_min(inst)[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.data())
def test_grid_symmetry_invariance(w, h, data):
    spec = GridSpec(w, h)
    cells = data.draw(st.lists(st.integers(0, spec.n - 1), unique=True, min_size=2, max_size=4))
    base = solve_grid_pdp(spec, Subset(cells))[0]
    for other, f in grid_symmetries(spec):
        assert solve_grid_pdp(other, Subset(f[c] for c in cells))[0] == base


@FAST
@given(instances())
def test_instance_text_round_trip(inst):
    assert parse_instance(format_instance(inst))[0] == inst
