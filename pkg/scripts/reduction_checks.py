"""End-to-end checks of the hardness generators against the source brute-force solvers.

Prints one line per family; ``--bmcc`` also runs the (slower) biclique gadget cases.

    python3 scripts/reduction_checks.py --bmcc
"""
import argparse
import sys
import time

from distpres.families import mcc_family, mwc3_family, rsa_point_sets
from distpres.grid import solve_grid_pdp
from distpres.oracle import bb_min, brute_force_min
from distpres.reductions import (BmccInstance, RsaInstance, alc_to_vc3bipdp, bmcc_brute, bmcc_to_sdp_core,
                                 mcc_brute, mcc_to_sdp, mwc3_brute, mwc3_to_alc, rsa_brute, rsa_to_pdp)


def mcc(count):
    bad = 0
    for src in mcc_family(count) + mcc_family(count, seed=8, linked=False):
        gen = mcc_to_sdp(src)
        yes = (not gen.certified_no) and brute_force_min(gen.instance, cap=40)[0] <= gen.budget
        bad += yes != mcc_brute(src)
    return bad


def mwc3(count):
    bad = 0
    for src in mwc3_family(count):
        alc, _ = mwc3_to_alc(src)
        opt = bb_min(alc_to_vc3bipdp(alc).instance)[0]
        bad += opt != (src.n + 1) * len(src.edges) + mwc3_brute(src)
    return bad


def rsa(limit):
    bad = 0
    for pts in rsa_point_sets()[:limit]:
        gen = rsa_to_pdp(RsaInstance(pts))
        bad += solve_grid_pdp(gen.grid, gen.instance.terminals, canonical=False)[0] != rsa_brute(RsaInstance(pts))
    return bad


def bmcc():
    bad = 0
    for src in [BmccInstance(((0,),), ((1,),), ((0, 1),)), BmccInstance(((0,),), ((1,),), ()),
                BmccInstance(((0, 1),), ((2, 3),), ((1, 3),)), BmccInstance(((0, 1),), ((2, 3),), ())]:
        inst, k = bmcc_to_sdp_core(src)
        opt = bb_min(inst)[0]
        print(f"  bmcc p={src.p} edges={len(src.edges)} n={inst.graph.n} k'={k} opt={opt}", file=sys.stderr)
        bad += (opt == k) != bmcc_brute(src)
    return bad


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=60)
    ap.add_argument("--rsa-limit", type=int, default=None, help="first N point sets only")
    ap.add_argument("--bmcc", action="store_true")
    args = ap.parse_args()
    jobs = [("mcc", lambda: mcc(args.count)), ("mwc3", lambda: mwc3(args.count // 2)),
            ("rsa", lambda: rsa(args.rsa_limit))]
    if args.bmcc:
        jobs.append(("bmcc", bmcc))
    total = 0
    for name, job in jobs:
        t0 = time.perf_counter()
        bad = job()
        total += bad
        print(f"{name:5s} mismatches={bad} time={time.perf_counter() - t0:.1f}s")
    return 1 if total else 0


if __name__ == "__main__":
    sys.exit(main())
