import pytest

from distpres.graph import Graph, Instance, Pairs, Subset, verify_preserver
from distpres.oracle import SizeCapError, brute_force_min, bb_min

from test_graph import STAR, cycle, path


CASES = [
    (Instance(STAR, Subset([1, 2, 3])), 3),
    (Instance(cycle(6), Subset([0, 3])), 3),
    (Instance(cycle(4), Subset([0, 2])), 2),
    (Instance(path(5), Subset([0, 4])), 4),
    (Instance(cycle(4), Pairs([])), 0),
    (Instance(Graph.from_edges(4, [(0, 1)]), Pairs([(0, 3)])), 0),
]


@pytest.mark.parametrize("inst,opt", CASES)
@pytest.mark.parametrize("solver", [brute_force_min, bb_min])
def test_known_optima(solver, inst, opt):
    size, h = solver(inst)
    assert size == opt == h.size
    assert verify_preserver(inst, h.edges)


def test_brute_refuses_large_candidate_sets():
    # complete grid-like graph with many shortest paths between corners
    from distpres.grid import GridSpec, build_grid
    spec = GridSpec(8, 8)
    inst = Instance(build_grid(spec), Pairs([(spec.vid(0, 0), spec.vid(7, 7))]))
    with pytest.raises(SizeCapError):
        brute_force_min(inst)
    assert bb_min(inst)[0] == 14


def test_bb_witness_is_canonical():
    inst = Instance(cycle(4), Subset([0, 2]))
    assert bb_min(inst)[1].sorted() == bb_min(inst)[1].sorted()
    size, h = bb_min(inst, canonical=False)
    assert size == 2 and verify_preserver(inst, h.edges)


def test_bb_stats():
    st = {}
    bb_min(Instance(cycle(6), Subset([0, 3])), stats=st)
    assert st
