"""Command line: solve, verify, generate, bench, random."""
from __future__ import annotations

import argparse
import csv
import hashlib
import logging
import multiprocessing as mp
import random
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .graph import Graph, Instance, Pairs, Subset, first_violation, terminals_of, verify_preserver
from .grid import GridSpec, NotAGridError, build_grid, solve_grid_pdp
from .io import FormatError, format_instance, format_preserver, parse_instance, parse_preserver, parse_td
from .oracle import SizeCapError, bb_min, brute_force_min
from .reductions import (
    GadgetParams,
    alc_to_vc3bipdp,
    bmcc_to_sdp_core,
    format_source,
    mcc_to_sdp,
    mwc3_to_alc,
    parse_source,
    rsa_to_pdp,
    AlcInstance,
    BmccInstance,
    MccInstance,
    Mwc3Instance,
    RsaInstance,
)
from .treedec import decompose, make_nice
from .twdp import dp_solve
from .vc import min_vertex_cover, vc_solve

log = logging.getLogger("distpres")

EXIT_PARSE, EXIT_PRECONDITION, EXIT_SIZE_CAP = 2, 3, 4
ALGOS = ("auto", "brute", "bb", "grid", "twdp", "vc")
VC_THRESHOLD = 6
TW_THRESHOLD = 6
# DP tables range over bag plus terminals seen so far, so many terminals hurt too
TW_TERMINALS = 6


class PreconditionError(ValueError):
    pass


@dataclass
class RunReport:
    instance: str
    algo: str
    size: int
    witness: str
    seconds: float
    counters: dict = field(default_factory=dict)
    ok: bool = True

    def lines(self) -> list[str]:
        out = [
            f"instance: {self.instance}",
            f"algo: {self.algo}",
            f"size: {self.size}",
            f"witness: {self.witness}",
            f"time: {self.seconds:.4f}",
        ]
        out += [f"{k}: {v}" for k, v in sorted(self.counters.items())]
        out.append(f"ok: {'true' if self.ok else 'false'}")
        return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def load_instance(path: str):
    text = _read(path)
    inst, grid = parse_instance(text)
    return inst, grid, hashlib.sha256(text.encode()).hexdigest()[:16]


def pick_algo(inst: Instance, grid: GridSpec | None) -> str:
    if grid is not None:
        return "grid"
    if isinstance(inst.terminals, Subset) and min_vertex_cover(inst.graph, VC_THRESHOLD) is not None:
        return "vc"
    if len(terminals_of(inst.terminals)) <= TW_TERMINALS and decompose(inst.graph).width <= TW_THRESHOLD:
        return "twdp"
    return "bb"


def run_algo(algo: str, inst: Instance, grid: GridSpec | None, workers: int = 1, td=None):
    """Returns (size, Preserver, counters)."""
    stats: dict = {}
    if algo == "brute":
        size, h = brute_force_min(inst)
    elif algo == "bb":
        size, h = bb_min(inst, stats=stats)
    elif algo == "grid":
        if grid is None:
            raise PreconditionError("grid solver needs a 'grid W H' instance")
        size, h = solve_grid_pdp(grid, inst.terminals, graph=inst.graph, workers=workers, stats=stats)
    elif algo == "twdp":
        ntd = make_nice(td, inst.graph) if td is not None else None
        size, h = dp_solve(inst, ntd, stats=stats)
    elif algo == "vc":
        if not isinstance(inst.terminals, Subset):
            raise PreconditionError("vertex-cover solver needs subsetwise (S) terminals")
        size, h = vc_solve(inst, workers=workers, stats=stats)
    else:
        raise PreconditionError(f"unknown algorithm {algo!r}")
    return size, h, stats


def cmd_solve(args) -> int:
    inst, grid, dig = load_instance(args.instance)
    td = parse_td(_read(args.td)) if args.td else None
    algo = pick_algo(inst, grid) if args.algo == "auto" else args.algo
    t0 = time.perf_counter()
    try:
        size, h, stats = run_algo(algo, inst, grid, args.workers, td)
    except SizeCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except (PreconditionError, NotAGridError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    secs = time.perf_counter() - t0
    ok = size == h.size and verify_preserver(inst, h)
    counters = dict(stats)
    if inst.budget is not None:
        counters["within_budget"] = "true" if size <= inst.budget else "false"
    wpath = args.witness or "-"
    if args.witness:
        Path(args.witness).write_text(format_preserver(h))
    rep = RunReport(dig, algo, size, wpath, secs, counters, ok)
    print("\n".join(rep.lines()))
    return 0 if ok else 1


def cmd_verify(args) -> int:
    inst, _, _ = load_instance(args.instance)
    h = parse_preserver(_read(args.witness))
    try:
        bad = first_violation(inst, h.edges)
    except ValueError as e:
        print(f"invalid: {e}")
        return 1
    if bad is None:
        print(f"valid: {h.size} edges")
        return 0
    print(f"violated: {bad[0]} {bad[1]}")
    return 1


def cmd_generate(args) -> int:
    try:
        src = parse_source(_read(args.source))
    except (ValueError, IndexError) as e:
        raise FormatError(f"bad source file: {e}") from None
    want = {"mcc": MccInstance, "bmcc": BmccInstance, "mwc3": Mwc3Instance, "alc": AlcInstance, "rsa": RsaInstance}
    if not isinstance(src, want[args.kind]):
        raise FormatError(f"{args.source} is not a {args.kind} source")
    try:
        if args.kind == "mwc3":
            alc, budget = mwc3_to_alc(src)
            text = f"# generated by mwc3 from {Path(args.source).name}; k' = {budget}\n" + format_source(alc)
        else:
            if args.kind == "mcc":
                gen = mcc_to_sdp(src)
            elif args.kind == "rsa":
                gen = rsa_to_pdp(src)
            elif args.kind == "alc":
                gen = alc_to_vc3bipdp(src)
            else:
                params = None
                if args.alpha or args.ell or args.delta:
                    base = GadgetParams.default(src.padded().n, src.k)
                    params = GadgetParams(args.alpha or base.alpha, args.ell or base.ell, args.delta or base.delta)
                gen = bmcc_to_sdp_core(src, params)
            notes = [gen.provenance, f"k' = {gen.budget}"]
            if gen.certified_no:
                notes.append("source is a certified No-instance")
            text = format_instance(gen.instance, gen.grid, notes)
    except ValueError as e:
        raise FormatError(f"invalid source: {e}") from None
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _applicable(inst: Instance, grid) -> list[str]:
    out = ["brute", "bb", "twdp"]
    if isinstance(inst.terminals, Subset):
        out.append("vc")
    if grid is not None:
        out.append("grid")
    return out


def _timed(algo, inst, grid, conn):
    try:
        t0 = time.perf_counter()
        size, _, _ = run_algo(algo, inst, grid)
        conn.send(("ok", size, time.perf_counter() - t0))
    except SizeCapError:
        conn.send(("cap", None, 0.0))


def _bench_one(path: str, algos, timeout):
    inst, grid, _ = load_instance(path)
    g = inst.graph
    vc = min_vertex_cover(g, 12)
    row = {
        "file": Path(path).name,
        "n": g.n,
        "m": g.m,
        "terminals": len(inst.terminals.vertices) if isinstance(inst.terminals, Subset) else len(inst.terminals.pairs),
        "kind": "S" if isinstance(inst.terminals, Subset) else "P",
        "vc": len(vc) if vc is not None else ">12",
        "tw": decompose(g).width if g.n <= 400 else "",
    }
    for algo in algos:
        if algo not in _applicable(inst, grid):
            row[f"{algo}_size"], row[f"{algo}_time"] = "n/a", ""
            continue
        if timeout:
            ctx = mp.get_context("fork")
            a, b = ctx.Pipe(duplex=False)
            proc = ctx.Process(target=_timed, args=(algo, inst, grid, b))
            proc.start()
            if a.poll(timeout):
                status, size, secs = a.recv()
            else:
                status, size, secs = "timeout", None, timeout
            proc.terminate()
            proc.join()
        else:
            try:
                t0 = time.perf_counter()
                size = run_algo(algo, inst, grid)[0]
                status, secs = "ok", time.perf_counter() - t0
            except SizeCapError:
                status, size, secs = "cap", None, 0.0
        row[f"{algo}_size"] = size if status == "ok" else status
        row[f"{algo}_time"] = f"{secs:.4f}"
    return row


def cmd_bench(args) -> int:
    root = Path(args.corpus)
    if not root.is_dir():
        raise FormatError(f"{args.corpus} is not a directory")
    files = sorted(str(p) for p in root.iterdir() if p.is_file() and p.suffix in (".txt", ".inst"))
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ALGOS[1:]:
            raise FormatError(f"unknown algorithm {a!r}")
    if args.workers > 1 and files and not args.timeout:
        with mp.get_context("fork").Pool(args.workers) as pool:
            rows = pool.starmap(_bench_one, [(f, algos, None) for f in files])
    else:
        rows = [_bench_one(f, algos, args.timeout) for f in files]
    fields = ["file", "n", "m", "terminals", "kind", "vc", "tw"]
    for a in algos:
        fields += [f"{a}_size", f"{a}_time"]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.output:
            out.close()
    bad = 0
    for row in rows:
        sizes = {row[f"{a}_size"] for a in algos if isinstance(row[f"{a}_size"], int)}
        if len(sizes) > 1:
            bad += 1
            print(f"disagreement on {row['file']}: " + ", ".join(f"{a}={row[f'{a}_size']}" for a in algos),
                  file=sys.stderr)
    return 1 if bad else 0


def random_instance(rng: random.Random, n: int, m: int, terminals: int, pairs: int):
    allp = list(combinations(range(n), 2))
    g = Graph.from_edges(n, rng.sample(allp, min(m, len(allp))))
    if pairs:
        terms = Pairs(rng.sample(allp, min(pairs, len(allp))))
    else:
        terms = Subset(rng.sample(range(n), min(terminals, n)))
    return Instance(g, terms)


def cmd_random(args) -> int:
    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        note = [f"random seed={args.seed} index={i}"]
        if args.grid:
            try:
                w, h = (int(t) for t in args.grid.lower().split("x"))
                spec = GridSpec(w, h)
            except ValueError:
                raise FormatError(f"--grid expects WxH, got {args.grid!r}") from None
            cells = [(x, y) for x in range(w) for y in range(h)]
            g = build_grid(spec)
            if args.pairs:
                pts = [rng.sample(cells, 2) for _ in range(args.pairs)]
                terms = Pairs((spec.vid(*a), spec.vid(*b)) for a, b in pts)
            else:
                terms = Subset(spec.vid(*c) for c in rng.sample(cells, min(args.terminals, len(cells))))
            text = format_instance(Instance(g, terms), spec, note)
        else:
            text = format_instance(random_instance(rng, args.n, args.m, args.terminals, args.pairs), None, note)
        (out / f"rand_{i:04d}.txt").write_text(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, help="parallel workers inside solvers / bench")
    common.add_argument("-v", "--verbose", action="store_true")
    ap = argparse.ArgumentParser(prog="distpres", description="Exact minimum distance preservers.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGOS, default="auto")
    s.add_argument("--witness", help="write the preserver here")
    s.add_argument("--td", help="tree decomposition file for twdp")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[common], help="check a preserver against an instance")
    s.add_argument("instance")
    s.add_argument("witness")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("generate", parents=[common], help="build a reduction instance from a source file")
    s.add_argument("kind", choices=("mcc", "bmcc", "mwc3", "alc", "rsa"))
    s.add_argument("source")
    s.add_argument("-o", "--output")
    s.add_argument("--alpha", type=int)
    s.add_argument("--ell", type=int)
    s.add_argument("--delta", type=int)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("bench", parents=[common], help="run all applicable solvers over a corpus, CSV out")
    s.add_argument("corpus")
    s.add_argument("--algos", default="brute,bb,twdp,vc,grid")
    s.add_argument("--timeout", type=float, help="seconds per solver call")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("random", parents=[common], help="write a seeded random corpus")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--m", type=int, default=12)
    s.add_argument("--terminals", type=int, default=3)
    s.add_argument("--pairs", type=int, default=0)
    s.add_argument("--grid", help="WxH: full grid instances instead")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="corpus")
    s.set_defaults(func=cmd_random)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except FormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
