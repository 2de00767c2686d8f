"""Growth of (e2+1)/(e1+1) and of the test-to-item ratio C(n,d)/C(n,k) with n.

    python scripts/ratio_tables.py --d 5 --k 7 --i 3 --s 1 --n 50 100 200 400 800
"""
import argparse

from pooldesign.disjunct import fmt_ratio, ratio_table, size_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=5)
    ap.add_argument("--k", type=int, default=7)
    ap.add_argument("--i", type=int, default=3)
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--n", type=int, nargs="+", default=[20, 50, 100, 200, 400, 800])
    args = ap.parse_args()

    print(f"{'n':>5} {'e1+1':>8} {'e2+1':>14} {'ratio':>16}")
    for row in ratio_table(args.d, args.k, args.i, args.s, args.n):
        e2 = "-" if row.e2_plus_1 is None else row.e2_plus_1
        print(f"{row.n:>5} {row.e1_plus_1:>8} {e2:>14} {fmt_ratio(row.ratio):>16} {row.note}")
    print()
    print(f"{'n':>5} {'rows C(n,d)':>16} {'cols C(n,k)':>20} {'rows/cols':>10}")
    for row in size_table(args.d, args.k, args.n):
        print(f"{row.n:>5} {row.rows:>16} {row.cols:>20} {fmt_ratio(row.ratio):>10}")


if __name__ == "__main__":
    main()
