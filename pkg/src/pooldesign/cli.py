"""Command-line interface: build, bounds, verify, simulate, reproduce-example.

Exit codes: 0 success, 1 invalid parameters, 2 budget or resource exceeded.
Subsets shown to the user are 1-based; matrix ranks in files are 0-based.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Optional

from pooldesign import design as dz
from pooldesign import disjunct as dj
from pooldesign.decode import run_trials
from pooldesign.design import DesignParams, InvalidParams, MemoryBudgetExceeded

EXIT_INVALID = 1
EXIT_BUDGET = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_s_range(text: str) -> list[int]:
    """'a..b' inclusive, or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad s-range {text!r}, expected a..b or an integer")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad s-range {text!r}, need 1 <= a <= b")
    return list(range(lo, hi + 1))


def parse_int_set(text: str) -> list[int]:
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad intersection set {text!r}, expected e.g. 0,1")


def add_params(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--n", type=int, required=required, help="ground set size")
    p.add_argument("--d", type=int, required=required, help="row subset size")
    p.add_argument("--k", type=int, required=required, help="column subset size")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--containment", action="store_true", help="Macula's M(d,k,n)")
    mode.add_argument("--i", type=int, help="exact intersection size, M(i;d,k,n)")
    mode.add_argument("--I", dest="I", type=parse_int_set, help="intersection set, e.g. 1,2")


def params_from(args) -> DesignParams:
    if args.n is None or args.d is None or args.k is None:
        raise CliError("--n, --d and --k are required", EXIT_INVALID)
    try:
        if args.I is not None:
            return DesignParams.intersection_set(args.I, args.d, args.k, args.n)
        if args.i is not None:
            return DesignParams.exact_intersection(args.i, args.d, args.k, args.n)
        return DesignParams.containment(args.d, args.k, args.n)
    except InvalidParams as exc:
        raise CliError(f"invalid parameters: {exc}", EXIT_INVALID)


def range_warnings(params: DesignParams) -> list[str]:
    out = []
    if params.I == {0}:
        out.append("note: I={0} (disjointness) lies outside the analysed range of the theorems")
    i = params.singleton
    if i is not None and not params.is_containment and i < (params.d + 1) // 2:
        out.append(f"note: i={i} < floor((d+1)/2); the intersection bound assumes the dual normalisation")
    return out


def open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def emit(text: str, path: Optional[str]) -> None:
    fh, close = open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def budget_from(args) -> int:
    return args.budget if args.budget is not None else dj.default_budget()


# -- subcommands -----------------------------------------------------------

def cmd_build(args) -> int:
    params = params_from(args)
    for w in range_warnings(params):
        print(w, file=sys.stderr)
    try:
        design = dz.build(params, "dense", args.memory_budget)
    except MemoryBudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET)
    meta = dz.metadata(design)
    buf = io.StringIO()
    if args.format == "text":
        dz.write_dense_text(design, buf)
    elif args.format == "csv":
        dz.write_sparse_csv(design, buf)
    else:
        doc = dict(meta, columns=[list(dz.bitset.iter_indices(s)) for s in design.supports()])
        buf.write(json.dumps(doc) + "\n")
    emit(buf.getvalue(), args.output)
    if args.format != "json":
        meta_text = json.dumps(meta) + "\n"
        if args.output and args.output != "-":
            emit(meta_text, args.output + ".meta.json")
        else:
            sys.stderr.write(meta_text)
    return 0


def bounds_rows(params: DesignParams, s_values: list[int]) -> list[dict]:
    rows = []
    i = params.singleton
    for s in s_values:
        row = {"s": s, "e1": None, "e2": None, "e1_reason": None, "e2_reason": None}
        try:
            row["e1"] = dj.theorem_e1(s, params.d, params.k)
        except dj.Inapplicable as exc:
            row["e1_reason"] = exc.reason
        if i is None:
            row["e2_reason"] = "needs a singleton intersection set"
        else:
            try:
                row["e2"] = dj.theorem_e2(s, i, params.d, params.k, params.n)
            except dj.Inapplicable as exc:
                row["e2_reason"] = exc.reason
        rows.append(row)
    return rows


def cmd_bounds(args) -> int:
    params = params_from(args)
    rows = bounds_rows(params, args.s)
    if args.format == "json":
        emit(json.dumps({"design": params.label(), "rows": rows}) + "\n", args.output)
        return 0
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "e1", "e2", "conditions"])
        for r in rows:
            w.writerow([r["s"], _cell(r["e1"]), _cell(r["e2"]), _conditions(r)])
        emit(buf.getvalue(), args.output)
        return 0
    lines = [f"bounds for {params.label()} (e1 = Macula containment bound with same d,k;"
             " e2 = intersection bound)",
             f"{'s':>3} {'e1':>10} {'e2':>10}  conditions"]
    for r in rows:
        lines.append(f"{r['s']:>3} {_cell(r['e1']):>10} {_cell(r['e2']):>10}  {_conditions(r)}")
    emit("\n".join(lines) + "\n", args.output)
    return 0


def _cell(v) -> str:
    return "-" if v is None else str(v)


def _conditions(r: dict) -> str:
    parts = []
    if r["e1_reason"]:
        parts.append(f"e1: {r['e1_reason']}")
    if r["e2_reason"]:
        parts.append(f"e2: {r['e2_reason']}")
    return "; ".join(parts) if parts else "all applicable"


def _load_design(args):
    if args.matrix:
        try:
            return dz.load_matrix(args.matrix), None
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read matrix: {exc}", EXIT_INVALID)
    params = params_from(args)
    for w in range_warnings(params):
        print(w, file=sys.stderr)
    try:
        return dz.build(params, "dense", args.memory_budget), params
    except MemoryBudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET)


def cmd_verify(args) -> int:
    design, params = _load_design(args)
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    reports = []
    for s in args.s:
        try:
            if args.mode == "greedy":
                rep = dj.greedy_upper(design, s, seed=args.seed, trials=args.trials, params=params)
            else:
                rep = dj.exact_e_max(design, s, budget=budget_from(args), workers=workers,
                                     params=params)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INVALID)
        reports.append(rep)
    for a, b in zip(reports, reports[1:]):
        if b.exact and b.s == a.s + 1 and b.e < 0:
            a.notes.append(f"not {b.s}-disjunct")
    if args.format == "json":
        emit(json.dumps([r.to_json() for r in reports]) + "\n", args.output)
    else:
        label = params.label() if params else args.matrix
        lines = [f"disjunctness of {label}"]
        for r in reports:
            kind = "exact" if r.exact else "upper bound"
            others = ",".join(design.describe_column(o) for o in r.others)
            lines.append(f"s={r.s}: e={r.e} ({kind}); witness {design.describe_column(r.designated)}"
                         f" vs {others}; evaluations={r.evaluations}")
            for name, bound in (("e1", r.e1), ("e2", r.e2)):
                if bound is not None:
                    lines.append(f"    {name}={bound} gap={r.e - bound}")
            lines.extend(f"    {note}" for note in r.notes)
        emit("\n".join(lines) + "\n", args.output)
    if args.require_exact and not all(r.exact for r in reports):
        print("budget exhausted before the search completed", file=sys.stderr)
        return EXIT_BUDGET
    return 0


def cmd_simulate(args) -> int:
    design, params = _load_design(args)
    if args.s < 0 or args.e < 0 or args.trials < 0:
        raise CliError("--s, --e and --trials must be non-negative", EXIT_INVALID)
    try:
        summary = run_trials(design, args.s, args.e, args.trials, policy=args.policy,
                             seed=args.seed, threshold=args.threshold, num_errors=args.errors)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID)
    buf = io.StringIO()
    if args.format == "json":
        for rec in summary.records:
            buf.write(json.dumps(rec.to_json()) + "\n")
        buf.write(json.dumps(summary.to_json()) + "\n")
    elif args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "planted", "errors", "decoded", "verdict"])
        for rec in summary.records:
            w.writerow([rec.trial, " ".join(map(str, rec.planted)), rec.num_errors,
                        " ".join(map(str, rec.decoded)), rec.verdict])
    else:
        rate = "-" if summary.recovery_rate is None else f"{summary.recovery_rate:.4f}"
        buf.write(f"trials={summary.num_trials} s={summary.s} e={summary.e} "
                  f"threshold={summary.threshold} policy={summary.policy} seed={summary.seed}\n")
        buf.write(f"recovery rate {rate} ({summary.recoveries}/{summary.num_trials}), "
                  f"min margin {_cell(summary.min_margin)}\n")
    emit(buf.getvalue(), args.output)
    return 0


EXAMPLE_CLAIMS = [
    # (design, s, claimed e, "fully")
    (DesignParams.containment(5, 7, 50), 1, 14, True),
    (DesignParams.containment(5, 7, 50), 2, 9, True),
    (DesignParams.containment(5, 7, 50), 3, 5, True),
    (DesignParams.exact_intersection(3, 5, 7, 50), 1, 9989, False),
    (DesignParams.exact_intersection(3, 5, 7, 50), 2, 2324, False),
    (DesignParams.exact_intersection(3, 5, 7, 50), 3, 299, False),
    (DesignParams.containment(4, 5, 13), 1, 3, True),
    (DesignParams.containment(4, 5, 13), 2, 2, True),
    (DesignParams.exact_intersection(3, 4, 5, 13), 1, 29, False),
    (DesignParams.exact_intersection(3, 4, 5, 13), 2, 5, False),
]

EXACT_LIMIT_COLS = 5000


def reproduce_example(budget: Optional[int] = None) -> list[dict]:
    rows = []
    cache = {}
    for params, s, claimed, fully in EXAMPLE_CLAIMS:
        e1, e2 = dj.bounds_for(params, s)
        formula = e1 if params.is_containment else e2
        row = {"design": params.label(), "s": s, "claimed": claimed, "formula": formula,
               "fully": fully, "exact": None, "status": None}
        if params.num_cols > EXACT_LIMIT_COLS:
            row["status"] = "formula only (instance too large for exact verification)"
        else:
            if params not in cache:
                cache[params] = dz.build(params)
            rep = dj.exact_e_max(cache[params], s, budget=budget)
            row["exact"] = rep.e if rep.exact else None
            if not rep.exact:
                row["status"] = "BOUND-ONLY (budget exhausted)"
            elif fully:
                row["status"] = "CONFIRMED" if rep.e == formula else "MISMATCH"
            else:
                row["status"] = ("CONFIRMED" if rep.e == formula else
                                 f"BOUND-ONLY (exact e={rep.e}, gap {rep.e - formula})"
                                 if rep.e >= formula else "VIOLATED")
        rows.append(row)
    return rows


def cmd_reproduce_example(args) -> int:
    start = time.perf_counter()
    rows = reproduce_example(budget_from(args))
    if args.format == "json":
        emit(json.dumps(rows) + "\n", args.output)
        return 0
    lines = [f"{'design':<16} {'s':>2} {'claimed':>8} {'formula':>8} {'exact':>6}  status"]
    for r in rows:
        lines.append(f"{r['design']:<16} {r['s']:>2} {r['claimed']:>8} {r['formula']:>8} "
                     f"{_cell(r['exact']):>6}  {r['status']}")
    ok = all(r["claimed"] == r["formula"] for r in rows)
    lines.append(f"formula values match the published example: {'yes' if ok else 'NO'}")
    emit("\n".join(lines) + "\n", args.output)
    print(f"elapsed {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pooldesign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="text", formats=("text", "csv", "json")):
        p.add_argument("--format", choices=formats, default=fmt_default)
        p.add_argument("--output", "-o", help="output path (default: stdout)")

    p = sub.add_parser("build", help="export a design matrix")
    add_params(p)
    common(p)
    p.add_argument("--memory-budget", type=int, default=dz.DEFAULT_MEMORY_BUDGET)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("bounds", help="closed-form e1/e2 per s")
    add_params(p)
    common(p)
    p.add_argument("--s", type=parse_s_range, default=[1])
    p.set_defaults(func=cmd_bounds)

    for name, func, helptext in (("verify", cmd_verify, "exact or greedy disjunctness search"),
                                 ("simulate", cmd_simulate, "seeded decoding trials")):
        p = sub.add_parser(name, help=helptext)
        add_params(p, required=False)
        p.add_argument("--matrix", help="sparse CSV matrix instead of design parameters")
        p.add_argument("--memory-budget", type=int, default=dz.DEFAULT_MEMORY_BUDGET)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=None)
        common(p)
        p.set_defaults(func=func)
    verify, simulate = sub.choices["verify"], sub.choices["simulate"]
    verify.add_argument("--s", type=parse_s_range, default=[1])
    verify.add_argument("--budget", type=int, default=None, help="max configurations evaluated")
    verify.add_argument("--require-exact", action="store_true")
    verify.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    verify.add_argument("--trials", type=int, default=None, help="designated columns sampled (greedy)")
    simulate.add_argument("--s", type=int, required=True)
    simulate.add_argument("--e", type=int, required=True)
    simulate.add_argument("--trials", type=int, default=1000)
    simulate.add_argument("--policy", choices=("random", "adversarial"), default="random")
    simulate.add_argument("--threshold", type=int, default=None, help="default floor(e/2)")
    simulate.add_argument("--errors", type=int, default=None,
                          help="fixed error count per trial (default uniform 0..threshold)")

    p = sub.add_parser("reproduce-example", help="recompute the published example values")
    common(p, formats=("text", "json"))
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_reproduce_example)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
