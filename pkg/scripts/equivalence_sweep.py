"""Run every exact solver on the seeded random corpus and write per-instance sizes and times.

    python3 scripts/equivalence_sweep.py --count 240 -o results/sweep.csv
"""
import argparse
import csv
import sys
import time

from distpres.families import SWEEP_SEED, sweep_corpus
from distpres.graph import Subset
from distpres.oracle import bb_min, brute_force_min
from distpres.treedec import decompose
from distpres.twdp import dp_solve
from distpres.vc import min_vertex_cover, vc_solve

SOLVERS = {"brute": brute_force_min, "bb": bb_min, "dp": dp_solve, "vc": vc_solve}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=240)
    ap.add_argument("--seed", type=int, default=SWEEP_SEED)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    rows = []
    disagree = 0
    for i, inst in enumerate(sweep_corpus(args.count, args.seed)):
        g = inst.graph
        row = {"idx": i, "n": g.n, "m": g.m, "kind": "S" if isinstance(inst.terminals, Subset) else "P",
               "pairs": len(inst.pairs), "tw": decompose(g).width, "vc": len(min_vertex_cover(g))}
        sizes = set()
        for name, fn in SOLVERS.items():
            if name == "vc" and row["kind"] != "S":
                row[f"{name}_size"] = row[f"{name}_time"] = ""
                continue
            t0 = time.perf_counter()
            size = fn(inst)[0]
            row[f"{name}_size"] = size
            row[f"{name}_time"] = f"{time.perf_counter() - t0:.5f}"
            sizes.add(size)
        disagree += len(sizes) > 1
        rows.append(row)

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.output:
        out.close()
    for name in SOLVERS:
        ts = [float(r[f"{name}_time"]) for r in rows if r[f"{name}_time"]]
        print(f"{name:6s} runs={len(ts):4d} total={sum(ts):7.2f}s max={max(ts):.4f}s", file=sys.stderr)
    print(f"{len(rows)} instances, {disagree} disagreements", file=sys.stderr)
    return 1 if disagree else 0


if __name__ == "__main__":
    sys.exit(main())
