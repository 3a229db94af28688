"""Text formats: instances, preservers and tree decompositions.

Instance::

    # comment
    g <n>                 (or: grid <W> <H>, edges implied)
    e <u> <v>             one per edge
    S <v> <v> ...         subsetwise terminals (lines accumulate)
    P <u> <v>             one terminal pair per line
    k <budget>            optional

On a grid, vertex tokens may be written ``(x,y)``. Preserver::

    size <m>
    e <u> <v>

Tree decomposition: a ``td`` line, then ``b <node> <v> ...`` and ``t <a> <b>``.
"""
from __future__ import annotations

import re

from .graph import Graph, Instance, Pairs, Preserver, Subset
from .grid import GridSpec, build_grid
from .treedec import TreeDecomposition


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


_XY = re.compile(r"^\((-?\d+),(-?\d+)\)$")


def _records(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", no) from None


def parse_instance(text: str) -> tuple[Instance, GridSpec | None]:
    n = None
    grid = None
    edges = []
    subset: list[int] | None = None
    pairs: list[tuple[int, int]] | None = None
    budget = None

    def vertex(tok: str, no: int) -> int:
        m = _XY.match(tok)
        if m:
            if grid is None:
                raise FormatError("(x,y) vertex outside a grid instance", no)
            x, y = int(m.group(1)), int(m.group(2))
            if not (0 <= x < grid.width and 0 <= y < grid.height):
                raise FormatError(f"point ({x},{y}) outside the grid", no)
            return grid.vid(x, y)
        return _int(tok, no)

    for no, rec in _records(text):
        tag, args = rec[0], rec[1:]
        if tag in ("g", "grid"):
            if n is not None:
                raise FormatError("second graph header", no)
            if tag == "g":
                if len(args) != 1:
                    raise FormatError("usage: g <n>", no)
                n = _int(args[0], no)
            else:
                if len(args) != 2:
                    raise FormatError("usage: grid <W> <H>", no)
                try:
                    grid = GridSpec(_int(args[0], no), _int(args[1], no))
                except ValueError as e:
                    raise FormatError(str(e), no) from None
                n = grid.n
            continue
        if n is None:
            raise FormatError("graph header must come first", no)
        if tag == "e":
            if grid is not None:
                raise FormatError("grid instances take no edge lines", no)
            if len(args) != 2:
                raise FormatError("usage: e <u> <v>", no)
            edges.append((vertex(args[0], no), vertex(args[1], no)))
        elif tag == "S":
            if pairs is not None:
                raise FormatError("mixing S and P terminals", no)
            subset = (subset or []) + [vertex(t, no) for t in args]
        elif tag == "P":
            if subset is not None:
                raise FormatError("mixing S and P terminals", no)
            if len(args) != 2:
                raise FormatError("usage: P <u> <v>", no)
            pairs = (pairs or []) + [(vertex(args[0], no), vertex(args[1], no))]
        elif tag == "k":
            if len(args) != 1:
                raise FormatError("usage: k <budget>", no)
            budget = _int(args[0], no)
        else:
            raise FormatError(f"unknown record {tag!r}", no)
    if n is None:
        raise FormatError("missing graph header")
    try:
        g = build_grid(grid) if grid is not None else Graph.from_edges(n, edges)
        terms = Subset(subset) if subset is not None else Pairs(pairs or [])
        return Instance(g, terms, budget), grid
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_instance(inst: Instance, grid: GridSpec | None = None, comments=()) -> str:
    out = [f"# {c}" for c in comments]
    if grid is not None:
        out.append(f"grid {grid.width} {grid.height}")
    else:
        out.append(f"g {inst.graph.n}")
        out += [f"e {u} {v}" for u, v in inst.graph.edges]
    t = inst.terminals
    if isinstance(t, Subset):
        out.append("S " + " ".join(map(str, t.vertices)))
    else:
        out += [f"P {u} {v}" for u, v in t.pairs]
    if inst.budget is not None:
        out.append(f"k {inst.budget}")
    return "\n".join(out) + "\n"


def parse_preserver(text: str) -> Preserver:
    size = None
    edges = []
    for no, rec in _records(text):
        if rec[0] == "size" and len(rec) == 2:
            size = _int(rec[1], no)
        elif rec[0] == "e" and len(rec) == 3:
            edges.append((_int(rec[1], no), _int(rec[2], no)))
        else:
            raise FormatError(f"unexpected record {' '.join(rec)!r}", no)
    h = Preserver(edges)
    if size is not None and size != h.size:
        raise FormatError(f"size {size} but {h.size} distinct edges listed")
    return h


def format_preserver(h: Preserver) -> str:
    return "\n".join([f"size {h.size}"] + [f"e {u} {v}" for u, v in h.sorted()]) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    bags: dict[int, frozenset[int]] = {}
    tree = []
    seen_header = False
    for no, rec in _records(text):
        if rec[0] == "td":
            seen_header = True
        elif rec[0] == "b":
            bags[_int(rec[1], no)] = frozenset(_int(t, no) for t in rec[2:])
        elif rec[0] == "t" and len(rec) == 3:
            tree.append((_int(rec[1], no), _int(rec[2], no)))
        else:
            raise FormatError(f"unexpected record {' '.join(rec)!r}", no)
    if not seen_header:
        raise FormatError("missing td header")
    ids = sorted(bags)
    index = {b: i for i, b in enumerate(ids)}
    try:
        return TreeDecomposition([bags[b] for b in ids], [(index[a], index[b]) for a, b in tree])
    except KeyError as e:
        raise FormatError(f"tree edge mentions unknown bag {e.args[0]}") from None


def format_td(td: TreeDecomposition) -> str:
    out = [f"td {len(td.bags)} {td.width + 1}"]
    out += [f"b {i} " + " ".join(map(str, sorted(b))) for i, b in enumerate(td.bags)]
    out += [f"t {a} {b}" for a, b in td.tree]
    return "\n".join(line.rstrip() for line in out) + "\n"
