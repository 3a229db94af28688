"""Grid solver running time against grid side and terminal count (plot data).

bb_min on the same instances is run in a child process with a timeout, for
comparison; ``timeout`` in the bb column means it did not finish.

    python3 scripts/grid_scaling.py --sides 10 20 30 50 --terminals 3 4 5 6 -o results/grid.csv
"""
import argparse
import csv
import multiprocessing as mp
import random
import sys
import time

from distpres.graph import Instance, Subset
from distpres.grid import GridSpec, build_grid, solve_grid_pdp
from distpres.oracle import bb_min


def _bb(inst, conn):
    t0 = time.perf_counter()
    size = bb_min(inst, canonical=False)[0]
    conn.send((size, time.perf_counter() - t0))


def bb_with_timeout(inst, timeout):
    ctx = mp.get_context("fork")
    a, b = ctx.Pipe(duplex=False)
    p = ctx.Process(target=_bb, args=(inst, b))
    p.start()
    res = a.recv() if a.poll(timeout) else None
    p.terminate()
    p.join()
    return res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sides", type=int, nargs="+", default=[10, 20, 30, 50])
    ap.add_argument("--terminals", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=50)
    ap.add_argument("--bb-timeout", type=float, default=10.0)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = []
    for side in args.sides:
        spec = GridSpec(side, side)
        g = build_grid(spec)
        for k in args.terminals:
            for rep in range(args.reps):
                cells = rng.sample(range(spec.n), k)
                st = {}
                t0 = time.perf_counter()
                size, _ = solve_grid_pdp(spec, Subset(cells), graph=g, stats=st, canonical=False)
                secs = time.perf_counter() - t0
                bb = bb_with_timeout(Instance(g, Subset(cells)), args.bb_timeout) if args.bb_timeout else None
                rows.append({"side": side, "terminals": k, "rep": rep, "size": size, "grid_time": f"{secs:.4f}",
                             "segments": st.get("segments", ""), "nodes": st.get("nodes", ""),
                             "bb_size": bb[0] if bb else "timeout", "bb_time": f"{bb[1]:.4f}" if bb else ""})
                print(f"side={side} k={k} rep={rep} size={size} {secs:.3f}s bb={rows[-1]['bb_size']}",
                      file=sys.stderr)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.output:
        out.close()


if __name__ == "__main__":
    main()
