"""Exact disjunctness of M(I; d, k, n) for every proper intersection set I.

No closed form is known for general I, so this just measures e_max(s).

    python scripts/intersection_sets.py --n 9 --d 2 --k 4 --s 1 2
"""
import argparse
from itertools import combinations

from pooldesign import DesignParams, build, exact_e_max


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--s", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args()

    print(f"{'design':<22} {'rows':>5} {'cols':>5} " + " ".join(f"{'e(' + str(s) + ')':>6}" for s in args.s))
    for size in range(1, args.d + 1):
        for I in combinations(range(args.d + 1), size):
            dz = build(DesignParams.intersection_set(I, args.d, args.k, args.n))
            es = [exact_e_max(dz, s).e for s in args.s]
            print(f"{dz.params.label():<22} {dz.num_rows:>5} {dz.num_cols:>5} "
                  + " ".join(f"{e:>6}" for e in es))


if __name__ == "__main__":
    main()
