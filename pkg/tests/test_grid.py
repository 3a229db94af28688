import random

import pytest

from distpres.graph import Instance, Pairs, Subset
from distpres.grid import GridSpec, NotAGridError, build_grid, grid_symmetries, hanan_grid, solve_grid_pdp
from distpres.oracle import bb_min


@pytest.mark.parametrize("w,h,m", [(2, 2, 4), (1, 5, 4), (3, 3, 12)])
def test_build_grid(w, h, m):
    g = build_grid(GridSpec(w, h))
    assert g.n == w * h and g.m == m


def test_hanan_counts():
    s = GridSpec(5, 5)
    hg = hanan_grid(s, [s.vid(0, 0), s.vid(4, 4)])
    assert len(hg.intersections) == 4 and len(hg.segments) == 4
    hg = hanan_grid(s, [s.vid(0, 0), s.vid(2, 4), s.vid(4, 2)])
    assert len(hg.intersections) == 9 and len(hg.segments) == 12
    hg = hanan_grid(s, [s.vid(0, 1), s.vid(3, 1), s.vid(4, 1)])
    assert [seg.length for seg in hg.segments] == [3, 1]


def test_small_grid_values():
    s = GridSpec(5, 5)
    assert solve_grid_pdp(s, Pairs([(s.vid(0, 0), s.vid(4, 4))]))[0] == 8
    arms = Pairs([(s.vid(0, 0), s.vid(0, 4)), (s.vid(0, 0), s.vid(4, 0))])
    assert solve_grid_pdp(s, arms)[0] == 8


def test_subset_terminals():
    s = GridSpec(4, 4)
    t = Subset([s.vid(0, 0), s.vid(3, 3), s.vid(3, 0)])
    size, h = solve_grid_pdp(s, t)
    assert size == bb_min(Instance(build_grid(s), t))[0]


def test_random_pairs_match_oracle():
    rng = random.Random(5)
    s = GridSpec(6, 6)
    g = build_grid(s)
    for _ in range(10):
        cells = rng.sample(range(s.n), 6)
        pairs = Pairs(zip(cells[::2], cells[1::2]))
        size, h = solve_grid_pdp(s, pairs)
        assert size == h.size == bb_min(Instance(g, pairs))[0]


def test_rejects_non_grid():
    s = GridSpec(3, 3)
    from distpres.graph import Graph
    with pytest.raises(NotAGridError):
        solve_grid_pdp(s, Pairs([(0, 8)]), graph=Graph.from_edges(9, [(0, 8)]))


def test_symmetries_preserve_value():
    s = GridSpec(5, 3)
    pairs = [(s.vid(0, 0), s.vid(4, 2)), (s.vid(1, 2), s.vid(3, 0))]
    base = solve_grid_pdp(s, Pairs(pairs))[0]
    for spec, f in grid_symmetries(s):
        assert solve_grid_pdp(spec, Pairs([(f[a], f[b]) for a, b in pairs]))[0] == base


def test_parallel_matches_serial():
    s = GridSpec(12, 12)
    t = Subset([s.vid(0, 3), s.vid(11, 0), s.vid(5, 11), s.vid(9, 7)])
    assert solve_grid_pdp(s, t, workers=2) == solve_grid_pdp(s, t)
