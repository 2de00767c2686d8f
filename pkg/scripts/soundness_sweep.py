"""Exact e_max(s) against the intersection bound e2 over a parameter grid.

    python scripts/soundness_sweep.py --max-n 11 --max-d 4 --max-s 2
"""
import argparse
import time

from pooldesign import DesignParams, build, exact_e_max
from pooldesign.disjunct import Inapplicable, theorem_e2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=11)
    ap.add_argument("--max-d", type=int, default=4)
    ap.add_argument("--max-s", type=int, default=2)
    args = ap.parse_args()

    print(f"{'design':<16} {'s':>2} {'e2':>6} {'exact':>6} {'gap':>5}")
    violations = 0
    start = time.perf_counter()
    for n in range(3, args.max_n + 1):
        for d in range(1, args.max_d + 1):
            for k in range(d + 1, n):
                for i in range((d + 1) // 2, d + 1):
                    dz = None
                    for s in range(1, min(i, args.max_s) + 1):
                        try:
                            e2 = theorem_e2(s, i, d, k, n)
                        except Inapplicable:
                            continue
                        dz = dz or build(DesignParams.exact_intersection(i, d, k, n))
                        rep = exact_e_max(dz, s)
                        violations += rep.e < e2
                        print(f"{dz.params.label():<16} {s:>2} {e2:>6} {rep.e:>6} {rep.e - e2:>5}")
    print(f"violations: {violations}  ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
