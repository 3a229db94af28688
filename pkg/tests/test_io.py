import pytest

from distpres.graph import Graph, Instance, Pairs, Preserver, Subset
from distpres.grid import GridSpec, build_grid
from distpres.io import (FormatError, format_instance, format_preserver, format_td, parse_instance,
                         parse_preserver, parse_td)
from distpres.treedec import decompose

from test_graph import cycle


def test_instance_round_trip():
    inst = Instance(cycle(5), Subset([0, 2]), budget=3)
    back, grid = parse_instance(format_instance(inst, comments=["hello"]))
    assert back == inst and grid is None
    inst = Instance(cycle(5), Pairs([(0, 2), (1, 3)]))
    assert parse_instance(format_instance(inst))[0] == inst


def test_grid_instance():
    text = "grid 5 5\nP (0,0) (4,4)\nP 1 (1,1)\n"
    inst, spec = parse_instance(text)
    assert spec == GridSpec(5, 5) and inst.graph == build_grid(spec)
    assert inst.terminals == Pairs([(0, 24), (1, 6)])
    assert parse_instance(format_instance(inst, spec)) == (inst, spec)


def test_no_terminals_means_empty_pairs():
    inst, _ = parse_instance("g 2\ne 0 1\n")
    assert inst.terminals == Pairs([])


@pytest.mark.parametrize("text,line", [
    ("e 0 1\n", 1),
    ("g 3\ne 0 x\n", 2),
    ("g 3\nS 0\nP 0 1\n", 3),
    ("g 3\nq 1\n", 2),
    ("g 3\nS (1,1)\n", 2),
    ("grid 2 2\nP (0,0) (5,5)\n", 2),
    ("grid 2 2\ne 0 1\n", 2),
    ("g 3\ng 3\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(FormatError) as err:
        parse_instance(text)
    assert err.value.line == line


def test_semantic_errors():
    for text in ["", "g 2\ne 0 0\n", "g 2\nS 5\n", "g 2\ne 0 1\nk 4\n"]:
        with pytest.raises(FormatError):
            parse_instance(text)


def test_preserver_round_trip():
    h = Preserver([(2, 1), (0, 1)])
    assert parse_preserver(format_preserver(h)) == h
    assert parse_preserver("size 0\n") == Preserver()
    with pytest.raises(FormatError):
        parse_preserver("size 3\ne 0 1\n")


def test_td_round_trip():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)])
    td = decompose(g)
    back = parse_td(format_td(td))
    back.validate(g)
    assert back.width == td.width
    with pytest.raises(FormatError):
        parse_td("b 0 1 2\n")
    with pytest.raises(FormatError):
        parse_td("td\nb 0 1\nt 0 7\n")
