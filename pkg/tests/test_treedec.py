import pytest

from distpres.graph import Graph
from distpres.treedec import (FORGET, INTRO_EDGE, INTRO_VERTEX, JOIN, LEAF, TreeDecomposition, decompose,
                              exact_order, make_nice, min_fill_order)

from test_graph import cycle, path


def complete(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


TREE = Graph.from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])


@pytest.mark.parametrize("g,w", [(TREE, 1), (path(5), 1), (cycle(4), 2), (complete(4), 3), (cycle(9), 2)])
def test_width(g, w):
    td = decompose(g)
    td.validate(g)
    assert td.width == w


def test_min_fill_valid_on_larger_graph():
    from distpres.grid import GridSpec, build_grid
    g = build_grid(GridSpec(5, 4))
    assert len(min_fill_order(g)) == g.n
    td = decompose(g)
    td.validate(g)
    assert 4 <= td.width <= 6
    assert len(exact_order(cycle(6))) == 6


def test_validate_rejects():
    g = cycle(4)
    with pytest.raises(ValueError):
        TreeDecomposition([frozenset({0, 1, 2}), frozenset({2, 3})], [(0, 1)]).validate(g)  # edge 3-0 missing
    with pytest.raises(ValueError):
        TreeDecomposition([frozenset({0, 1, 3}), frozenset({1, 2}), frozenset({2, 3})],
                          [(0, 1), (1, 2)]).validate(g)  # vertex 3 not connected


@pytest.mark.parametrize("g", [Graph.from_edges(2, [(0, 1)]), path(3), cycle(5), complete(4), TREE,
                               Graph.from_edges(4, [(0, 1)])])
def test_nice_form(g):
    ntd = make_nice(decompose(g), g)
    c = ntd.counts()
    assert c.get(INTRO_EDGE, 0) == g.m
    assert sorted({t.vertex for t in ntd.nodes if t.kind == INTRO_VERTEX}) == list(range(g.n))
    assert not ntd.nodes[ntd.root].bag
    for i, t in enumerate(ntd.nodes):
        assert all(ch < i for ch in t.children)
        kids = [ntd.nodes[ch] for ch in t.children]
        if t.kind == LEAF:
            assert not t.bag and not kids
        elif t.kind == INTRO_VERTEX:
            assert t.bag == kids[0].bag | {t.vertex} and t.vertex not in kids[0].bag
        elif t.kind == FORGET:
            assert t.bag == kids[0].bag - {t.vertex} and t.vertex in kids[0].bag
        elif t.kind == INTRO_EDGE:
            assert t.bag == kids[0].bag and set(t.edge) <= t.bag
        elif t.kind == JOIN:
            assert len(kids) == 2 and kids[0].bag == kids[1].bag == t.bag


def test_single_edge_has_one_edge_node():
    g = Graph.from_edges(2, [(0, 1)])
    assert make_nice(decompose(g), g).counts()[INTRO_EDGE] == 1
