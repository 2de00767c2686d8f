"""Disjunctness parameters: closed-form bounds and exact search.

A matrix is s^e-disjunct when, for every designated column and every s other
columns, at least e+1 rows contain the designated column and none of the
others.  Those rows are the private rows of the configuration; e_max(s) is the
minimum private-row count over all configurations, minus one.  A value of -1
means the matrix is not even s-disjunct.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from pooldesign.combinatorics import binom
from pooldesign.design import DesignParams, Inapplicable, SupportMatrix

DEFAULT_BUDGET = 10**9


def default_budget() -> int:
    return int(os.environ.get("POOLDESIGN_BUDGET", DEFAULT_BUDGET))


def theorem_e1(s: int, d: int, k: int) -> int:
    """D'yachkov et al.: M(d, k, n) is fully s^e1-disjunct, e1 = C(k-s, d-s) - 1."""
    if not 1 <= s:
        raise Inapplicable(f"s={s} must be >= 1")
    if not s <= d:
        raise Inapplicable(f"s={s} must not exceed d={d}")
    if not d < k:
        raise Inapplicable(f"d={d} must be < k={k}")
    return binom(k - s, d - s) - 1


def theorem_e2(s: int, i: int, d: int, k: int, n: int) -> int:
    """Lower bound on e for M(i; d, k, n): C(k-s, i-s) * C(n-k-s(k+d-2i), d-i) - 1."""
    if not 1 <= s <= i:
        raise Inapplicable(f"need 1 <= s <= i, got s={s}, i={i}")
    if not (d + 1) // 2 <= i <= d < k:
        raise Inapplicable(f"need floor((d+1)/2) <= i <= d < k, got i={i}, d={d}, k={k}")
    free = n - k - s * (k + d - 2 * i)
    if free < d - i:
        raise Inapplicable(f"need n-k-s(k+d-2i) >= d-i, got {free} < {d - i}")
    return binom(k - s, i - s) * binom(free, d - i) - 1


def bounds_for(params: DesignParams, s: int) -> tuple[Optional[int], Optional[int]]:
    """(e1, e2) applicable to a design, None where the formula does not apply."""
    e1 = e2 = None
    if params.is_containment:
        try:
            e1 = theorem_e1(s, params.d, params.k)
        except Inapplicable:
            pass
    i = params.singleton
    if i is not None:
        try:
            e2 = theorem_e2(s, i, params.d, params.k, params.n)
        except Inapplicable:
            pass
    return e1, e2


def private_rows(design: SupportMatrix, designated: int, others: Sequence[int]) -> int:
    if designated in others:
        raise ValueError("designated column must not be among the others")
    if len(set(others)) != len(others):
        raise ValueError("other columns must be distinct")
    cover = 0
    for o in others:
        cover |= design.column_support(o)
    return (design.column_support(designated) & ~cover).bit_count()


@dataclass
class DisjunctReport:
    s: int
    t_min: int
    exact: bool
    designated: int
    others: tuple[int, ...]
    evaluations: int
    e1: Optional[int] = None
    e2: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def e(self) -> int:
        return self.t_min - 1

    def to_json(self) -> dict:
        return {"s": self.s, "e": self.e, "exact": self.exact,
                "witness": {"designated": self.designated, "others": list(self.others)},
                "e1": self.e1, "e2": self.e2, "evaluations": self.evaluations}


class _Search:
    """Branch-and-bound minimum of private rows for a range of designated columns.

    For a designated column only columns whose support meets its support can
    cover anything, so the others are drawn from those candidates, visited by
    descending overlap.  A branch is cut once even the best remaining overlaps
    cannot push the private count below the running minimum; ties are never
    recorded, so the witness is the first minimiser in search order.
    """

    def __init__(self, supports: Sequence[int], s: int, budget: int):
        self.supports = supports
        self.s = s
        self.budget = budget
        self.best = None
        self.witness = None
        self.evaluations = 0
        self.exhausted = False

    def run(self, designated: Sequence[int]) -> "_Search":
        supports = self.supports
        ncols = len(supports)
        for c0 in designated:
            if self.best == 0 or self.exhausted:
                break
            S0 = supports[c0]
            w0 = S0.bit_count()
            cand = []
            for c, S in enumerate(supports):
                if c != c0:
                    inter = S0 & S
                    if inter:
                        cand.append((-inter.bit_count(), c, inter))
            cand.sort()
            ov = [-x[0] for x in cand]
            covers = [x[2] for x in cand]
            depth = min(self.s, len(cand))
            if self.best is not None and w0 - sum(ov[:depth]) >= self.best:
                continue
            self._c0 = c0
            self._w0 = w0
            self._ov = ov
            self._covers = covers
            self._cols = [x[1] for x in cand]
            self._dfs(0, depth, 0, [])
        return self

    def _dfs(self, start: int, remaining: int, cover: int, chosen: list[int]) -> None:
        if remaining == 0:
            self.evaluations += 1
            t = self._w0 - cover.bit_count()
            if self.best is None or t < self.best:
                self.best = t
                self.witness = (self._c0, tuple(self._cols[j] for j in chosen))
            if self.evaluations >= self.budget:
                self.exhausted = True
            return
        ov = self._ov
        covered = cover.bit_count()
        last = len(ov) - remaining
        for j in range(start, last + 1):
            if self.exhausted or self.best == 0:
                return
            if self.best is not None and self._w0 - covered - sum(ov[j:j + remaining]) >= self.best:
                break
            chosen.append(j)
            self._dfs(j + 1, remaining - 1, cover | self._covers[j], chosen)
            chosen.pop()


def _search_chunk(args):
    supports, s, budget, designated = args
    srch = _Search(supports, s, budget).run(designated)
    return srch.best, srch.witness, srch.evaluations, srch.exhausted


def _pad(witness: tuple[int, tuple[int, ...]], s: int, ncols: int) -> tuple[int, ...]:
    c0, others = witness
    if len(others) >= s:
        return others
    used = set(others) | {c0}
    pads = [c for c in range(ncols) if c not in used][: s - len(others)]
    return tuple(others) + tuple(pads)


def exact_e_max(design: SupportMatrix, s: int, budget: Optional[int] = None,
                workers: int = 1, params: Optional[DesignParams] = None) -> DisjunctReport:
    """Exact e_max(s) by pruned exhaustive search over all configurations.

    Falls back to a best-so-far upper bound (exact=False) once `budget`
    configurations have been evaluated.  The minimum and witness do not depend
    on `workers`; the evaluation count does.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    budget = default_budget() if budget is None else budget
    if budget < 1:
        raise ValueError("budget must be >= 1")
    supports = design.supports()
    ncols = len(supports)
    if ncols < s + 1:
        raise ValueError(f"need at least s+1={s + 1} columns, matrix has {ncols}")
    if workers <= 1:
        results = [_search_chunk((supports, s, budget, range(ncols)))]
    else:
        bounds = [ncols * w // workers for w in range(workers + 1)]
        chunks = [(supports, s, max(1, budget // workers), range(bounds[w], bounds[w + 1]))
                  for w in range(workers) if bounds[w] < bounds[w + 1]]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_chunk, chunks))
    best = witness = None
    evaluations = 0
    exhausted = False
    for b, wit, ev, ex in results:
        evaluations += ev
        exhausted |= ex
        # chunks are in ascending designated order, so strict < keeps the first minimiser
        if b is not None and (best is None or b < best):
            best, witness = b, wit
    report = DisjunctReport(s=s, t_min=best, exact=not exhausted, designated=witness[0],
                            others=_pad(witness, s, ncols), evaluations=evaluations)
    _attach_bounds(report, design, params)
    return report


def greedy_upper(design: SupportMatrix, s: int, seed: int = 0, trials: Optional[int] = None,
                 params: Optional[DesignParams] = None) -> DisjunctReport:
    """Upper bound on e_max(s) from greedy covering of sampled designated columns.

    Each sampled column gets s others chosen one at a time to cover as much of
    its remaining support as possible.  The result can only overestimate e_max.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    supports = design.supports()
    ncols = len(supports)
    if ncols < s + 1:
        raise ValueError(f"need at least s+1={s + 1} columns, matrix has {ncols}")
    if trials is None or trials >= ncols:
        designated = list(range(ncols))
    else:
        designated = sorted(random.Random(seed).sample(range(ncols), trials))
    best = witness = None
    evaluations = 0
    for c0 in designated:
        left = supports[c0]
        chosen: list[int] = []
        for _ in range(s):
            pick, gain = None, -1
            for c, S in enumerate(supports):
                if c == c0 or c in chosen:
                    continue
                g = (left & S).bit_count()
                if g > gain:
                    pick, gain = c, g
            chosen.append(pick)
            left &= ~supports[pick]
        evaluations += 1
        t = left.bit_count()
        if best is None or t < best:
            best, witness = t, (c0, tuple(chosen))
    report = DisjunctReport(s=s, t_min=best, exact=False, designated=witness[0],
                            others=witness[1], evaluations=evaluations)
    _attach_bounds(report, design, params)
    return report


def _attach_bounds(report: DisjunctReport, design, params: Optional[DesignParams]) -> None:
    params = params if params is not None else getattr(design, "params", None)
    if params is not None:
        report.e1, report.e2 = bounds_for(params, report.s)
    if report.exact and report.e2 is not None and report.e < report.e2:
        report.notes.append(f"VIOLATION: exact e={report.e} below bound e2={report.e2}")


def fully_disjunct_profile(design: SupportMatrix, s_values: Sequence[int], **kw) -> list[DisjunctReport]:
    """Exact reports for each s, flagging where e_max(s+1) drops below zero."""
    reports = [exact_e_max(design, s, **kw) for s in s_values]
    for a, b in zip(reports, reports[1:]):
        if b.s == a.s + 1 and b.e < 0:
            a.notes.append(f"not {b.s}-disjunct: s={a.s} is the largest disjunct order")
    return reports


# -- tables ----------------------------------------------------------------

@dataclass
class RatioRow:
    n: int
    e1_plus_1: Optional[int]
    e2_plus_1: Optional[int]
    ratio: Optional[Fraction]
    note: str = ""


def ratio_table(d: int, k: int, i: int, s: int, n_values: Sequence[int]) -> list[RatioRow]:
    """(e2+1)/(e1+1) for growing n; diverges when i < d."""
    if not i < d:
        raise Inapplicable(f"the ratio diverges only for i < d, got i={i}, d={d}")
    e1 = theorem_e1(s, d, k)
    rows = []
    for n in n_values:
        try:
            e2 = theorem_e2(s, i, d, k, n)
        except Inapplicable as exc:
            rows.append(RatioRow(n, e1 + 1, None, None, exc.reason))
            continue
        rows.append(RatioRow(n, e1 + 1, e2 + 1, Fraction(e2 + 1, e1 + 1)))
    return rows


@dataclass
class SizeRow:
    n: int
    rows: int
    cols: int
    ratio: Fraction


def size_table(d: int, k: int, n_values: Sequence[int]) -> list[SizeRow]:
    """Test-to-item ratio C(n, d) / C(n, k); values of n below k are skipped."""
    if not d < k <= max(n_values):
        raise ValueError(f"need d < k <= max(n), got d={d}, k={k}")
    return [SizeRow(n, binom(n, d), binom(n, k), Fraction(binom(n, d), binom(n, k)))
            for n in n_values if n >= k]


def fmt_ratio(x: Optional[Fraction], places: int = 4) -> str:
    """Exact half-up rounding of a non-negative rational to fixed decimals."""
    if x is None:
        return "-"
    scaled = (x * 10**places * 2 + 1) // 2
    whole, frac = divmod(int(scaled), 10**places)
    return f"{whole}.{frac:0{places}d}" if places else str(whole)
