"""Decoding at and just beyond the guaranteed error capacity.

    python scripts/decode_demo.py --n 13 --d 4 --k 5 --i 3 --s 2 --trials 500
"""
import argparse

from pooldesign import DesignParams, build, exact_e_max, run_trials
from pooldesign.decode import find_failure


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=13)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--i", type=int, default=3)
    ap.add_argument("--s", type=int, default=2)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    dz = build(DesignParams.exact_intersection(args.i, args.d, args.k, args.n))
    rep = exact_e_max(dz, args.s)
    t = rep.e // 2
    print(f"{dz.params.label()}: exact e_max({args.s}) = {rep.e}, threshold t = {t}")
    for policy in ("random", "adversarial"):
        summary = run_trials(dz, args.s, rep.e, args.trials, policy=policy, seed=args.seed, num_errors=t)
        print(f"  {policy:<11} {t} errors: recovery {summary.recovery_rate:.4f}, min margin {summary.min_margin}")
    rec = find_failure(dz, rep.designated, rep.others, t)
    print(f"  witness attack with {rec.num_errors} flips: {rec.verdict} "
          f"(planted {list(rec.planted)}, decoded {list(rec.decoded)})")


if __name__ == "__main__":
    main()
