import pytest

from distpres.graph import (UNREACHABLE, Graph, Instance, Pairs, Preserver, Subset, all_pairs_distances,
                            canon, first_violation, pairs_of, prune_minimal, shortest_path_edge_union,
                            verify_preserver)


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


STAR = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def test_graph_normalizes_edges():
    g = Graph.from_edges(3, [(1, 0), (2, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.m == 2 and g.has_edge(1, 0)
    assert canon(5, 2) == (2, 5)


@pytest.mark.parametrize("edges", [[(0, 1), (1, 0)], [(0, 0)], [(0, 3)], [(-1, 1)]])
def test_graph_rejects_bad_edges(edges):
    with pytest.raises(ValueError):
        Graph.from_edges(3, edges)


def test_distances():
    assert all_pairs_distances(path(3), [0]).d(0, 2) == 2
    assert all_pairs_distances(cycle(4), [0]).d(0, 2) == 2
    assert all_pairs_distances(Graph.from_edges(2, []), [0]).d(0, 1) == UNREACHABLE


def test_pair_lists():
    assert pairs_of(Subset([2, 0, 1])) == [(0, 1), (0, 2), (1, 2)]
    assert pairs_of(Subset([4])) == []
    assert pairs_of(Pairs([(1, 0), (0, 1)])) == [(0, 1)]
    with pytest.raises(ValueError):
        Pairs([(3, 3)])


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance(path(3), Subset([0, 5]))
    with pytest.raises(ValueError):
        Instance(path(3), Subset([0, 2]), budget=3)


def test_shortest_path_union():
    assert shortest_path_edge_union(cycle(4), [(0, 2)]) == set(cycle(4).edges)
    assert shortest_path_edge_union(cycle(5), [(0, 2)]) == {(0, 1), (1, 2)}
    assert shortest_path_edge_union(path(3), [(0, 2)]) == {(0, 1), (1, 2)}
    assert shortest_path_edge_union(Graph.from_edges(3, [(0, 1)]), [(0, 2)]) == set()


def test_verify():
    c4 = Instance(cycle(4), Subset([0, 2]))
    assert verify_preserver(c4, cycle(4).edges)
    assert verify_preserver(c4, [(0, 1), (1, 2)])
    assert not verify_preserver(c4, [(0, 1)])
    assert first_violation(c4, [(0, 1)]) == (0, 2)
    with pytest.raises(ValueError):
        verify_preserver(c4, [(0, 2)])


def test_unreachable_pair_counts_as_preserved():
    g = Graph.from_edges(4, [(0, 1)])
    assert verify_preserver(Instance(g, Pairs([(0, 3), (2, 3)])), [])


def test_prune_minimal():
    c4 = Instance(cycle(4), Subset([0, 2]))
    assert prune_minimal(c4, cycle(4).edges).size == 2
    star = Instance(STAR, Subset([1, 2, 3]))
    assert prune_minimal(star, STAR.edges) == Preserver(STAR.edges)
    h = prune_minimal(c4, cycle(4).edges)
    assert prune_minimal(c4, h.edges) == h
    with pytest.raises(ValueError):
        prune_minimal(c4, [(0, 1)])
