#!/usr/bin/env python3
"""Threshold-reduction walkthrough: generate an interval-restricted stream,
round it to its 2-value proxy, run an allocation rule on the proxy, and report
the worst fairness ratios under both value systems next to the transferred
floors.  Also prints the trivial round-robin comparison for small a_star.

Example:
    python scripts/reduction_demo.py --n 3 --m 12 --seed 1 --alg deferred-priority
"""
import argparse
import sys

from fairstream.baselines import RoundRobin
from fairstream.cli import ALGORITHMS
from fairstream.driver import run_online
from fairstream.generators import interval_random
from fairstream.reduction import lift_guarantee, threshold_round


def _worst(rows, key, boundary=None):
    vals = [float(r.original[key]) for r in rows
            if key in r.original and (boundary is None or r.t % boundary == 0)]
    return min(vals) if vals else None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--m", type=int, default=12)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--alg", default="deferred-priority",
                    choices=["deferred-priority", "priority-matching"])
    args = ap.parse_args()

    inst = interval_random(args.n, args.m, args.seed, foresight=args.n - 1)
    pair = threshold_round(inst)
    print(f"alphas    : {[round(a.alpha, 3) for a in inst.agents]}")
    print(f"thresholds: {[round(t, 3) for t in pair.thresholds]}  a*={pair.a_star:.3f}")

    trace = run_online(ALGORITHMS[args.alg](), pair.proxy)
    rows = lift_guarantee(pair, trace)
    n = args.n
    print(f"{args.alg} on the proxy, ratios under original values:")
    for key, floor, boundary in (("mms", 1 / ((2 * n - 1) * pair.a_star), None),
                                 ("ef2", 1 / pair.a_star, None),
                                 ("ef1", 1 / pair.a_star, n)):
        worst = _worst(rows, key, boundary)
        if worst is not None:
            where = f" at multiples of {boundary}" if boundary else ""
            print(f"  worst {key}{where}: {worst:.4f}  (transferred floor {floor:.4f})")

    rr_rows = lift_guarantee(pair, run_online(RoundRobin(), pair.proxy))
    print(f"round-robin comparison (trivial 1/a* = {1 / pair.a_star:.4f} floor):")
    for key in ("ef1", "mms"):
        worst = _worst(rr_rows, key)
        if worst is not None:
            print(f"  worst {key}: {worst:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
