"""Table counts of the tree-decomposition DP against width and number of terminals (plot data).

    python3 scripts/dp_tables.py --count 200 -o results/dp_tables.csv
"""
import argparse
import csv
import random
import sys
import time

from distpres.families import small_instance
from distpres.graph import terminals_of
from distpres.twdp import dp_solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--max-m", type=int, default=24)
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = []
    for i in range(args.count):
        inst = small_instance(rng, args.max_n, args.max_m, 5)
        st = {}
        t0 = time.perf_counter()
        size, _ = dp_solve(inst, stats=st)
        rows.append({"idx": i, "n": inst.graph.n, "m": inst.graph.m, "terminals": len(terminals_of(inst.terminals)),
                     "width": st["width"], "nodes": st["nodes"], "max_tables": st["max_tables"],
                     "tables": st["tables"], "size": size, "time": f"{time.perf_counter() - t0:.4f}"})
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.output:
        out.close()
    by_width = {}
    for r in rows:
        by_width.setdefault(r["width"], []).append(r["max_tables"])
    for wd in sorted(by_width):
        v = by_width[wd]
        print(f"width {wd}: {len(v)} instances, max table count {max(v)}", file=sys.stderr)


if __name__ == "__main__":
    main()
