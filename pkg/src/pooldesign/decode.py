"""Non-adaptive group testing with a pooling design under outcome errors.

Decoding uses the threshold rule: an item is declared positive iff at most t
of its pools tested negative.  With an s^e-disjunct matrix, at most s
positives and at most floor(e/2) flipped outcomes, t = floor(e/2) recovers the
positives exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from pooldesign import bitset
from pooldesign.design import SupportMatrix


@dataclass(frozen=True)
class OutcomeVector:
    bits: int
    injected_errors: frozenset
    num_rows: int


@dataclass
class DecodeResult:
    decoded: frozenset
    mismatches: list[int]


@dataclass
class TrialRecord:
    trial: int
    planted: tuple[int, ...]
    num_errors: int
    decoded: tuple[int, ...]
    margin: int
    seed: list[int]

    @property
    def verdict(self) -> str:
        return "exact_recovery" if self.decoded == self.planted else "failure"

    def to_json(self) -> dict:
        return {"trial": self.trial, "planted": list(self.planted),
                "errors": self.num_errors, "decoded": list(self.decoded),
                "verdict": self.verdict, "margin": self.margin, "seed": self.seed}


@dataclass
class TrialSummary:
    s: int
    e: int
    threshold: int
    policy: str
    seed: int
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def num_trials(self) -> int:
        return len(self.records)

    @property
    def recoveries(self) -> int:
        return sum(r.verdict == "exact_recovery" for r in self.records)

    @property
    def recovery_rate(self) -> Optional[float]:
        return self.recoveries / self.num_trials if self.records else None

    @property
    def min_margin(self) -> Optional[int]:
        return min((r.margin for r in self.records), default=None)

    def to_json(self) -> dict:
        return {"summary": True, "trials": self.num_trials, "s": self.s, "e": self.e,
                "threshold": self.threshold, "policy": self.policy, "seed": self.seed,
                "recoveries": self.recoveries, "recovery_rate": self.recovery_rate,
                "min_margin": self.min_margin}


def _check_cols(design: SupportMatrix, cols: Iterable[int]) -> None:
    for c in cols:
        if not 0 <= c < design.num_cols:
            raise IndexError(f"column rank {c} out of range")


def true_outcomes(design: SupportMatrix, planted: Iterable[int]) -> int:
    planted = list(planted)
    _check_cols(design, planted)
    out = 0
    for c in planted:
        out |= design.column_support(c)
    return out


def decode(design: SupportMatrix, bits: int, threshold: int) -> DecodeResult:
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    negative = ~bits
    mismatches = [(S & negative).bit_count() for S in design.supports()]
    decoded = frozenset(c for c, m in enumerate(mismatches) if m <= threshold)
    return DecodeResult(decoded, mismatches)


def inject_errors(design: SupportMatrix, outcomes: int, e_budget: int,
                  policy: str = "random", seed=0,
                  planted: Sequence[int] = ()) -> OutcomeVector:
    """Flip exactly e_budget outcome bits.

    The adversarial policy is a greedy heuristic, not an optimal adversary: it
    alternates between hiding a planted item (flipping one of its positive
    pools that no other planted item covers) and exposing the non-planted item
    closest to acceptance (flipping one of its negative pools).
    """
    num_rows = design.num_rows
    if not 0 <= e_budget <= num_rows:
        raise ValueError(f"error budget {e_budget} must lie in 0..{num_rows}")
    rng = np.random.default_rng(seed)
    if policy == "random":
        flips = rng.choice(num_rows, size=e_budget, replace=False).tolist()
    elif policy == "adversarial":
        flips = _adversarial_flips(design, outcomes, e_budget, rng, list(planted))
    else:
        raise ValueError(f"unknown error policy {policy!r}")
    mask = bitset.from_indices(flips, num_rows)
    return OutcomeVector(outcomes ^ mask, frozenset(flips), num_rows)


def _adversarial_flips(design, outcomes, e_budget, rng, planted) -> list[int]:
    supports = design.supports()
    planted_set = set(planted)
    hide: list[int] = []
    for p in planted:
        others = 0
        for q in planted:
            if q != p:
                others |= supports[q]
        private = list(bitset.iter_indices(supports[p] & ~others))
        rng.shuffle(private)
        hide.extend(private)
    expose: list[int] = []
    negative = ~outcomes
    ranked = sorted((c for c in range(len(supports)) if c not in planted_set),
                    key=lambda c: ((supports[c] & negative).bit_count(), c))
    for c in ranked[:8]:
        rows = list(bitset.iter_indices(supports[c] & negative))
        rng.shuffle(rows)
        expose.extend(rows)
    flips: list[int] = []
    seen: set[int] = set()
    queues = [iter(hide), iter(expose)]
    turn = 0
    while len(flips) < e_budget and queues:
        q = queues[turn % len(queues)]
        r = next(q, None)
        if r is None:
            queues.remove(q)
            continue
        if r not in seen:
            seen.add(r)
            flips.append(r)
        turn += 1
    if len(flips) < e_budget:
        rest = [r for r in range(design.num_rows) if r not in seen]
        flips.extend(rng.choice(rest, size=e_budget - len(flips), replace=False).tolist())
    return flips


def _margin(mismatches: Sequence[int], planted: Iterable[int], threshold: int) -> int:
    planted = set(planted)
    worst_in = max((mismatches[c] for c in planted), default=0)
    best_out = min((m for c, m in enumerate(mismatches) if c not in planted), default=threshold + 1)
    return min(threshold - worst_in, best_out - threshold - 1)


def run_trials(design: SupportMatrix, s: int, e: int, num_trials: int,
               policy: str = "random", seed: int = 0, threshold: Optional[int] = None,
               num_errors: Optional[int] = None) -> TrialSummary:
    """Seeded decode simulations with up to s positives and up to t errors.

    Trial j draws from its own stream seeded by (seed, j).  The planted count
    is uniform in 0..s; the error count is uniform in 0..t unless fixed by
    `num_errors`.  Margin >= 0 exactly when a trial recovers the planted set.
    """
    t = e // 2 if threshold is None else threshold
    summary = TrialSummary(s=s, e=e, threshold=t, policy=policy, seed=seed)
    ncols = design.num_cols
    for j in range(num_trials):
        trial_seed = [seed, j]
        rng = np.random.default_rng(trial_seed)
        size = int(rng.integers(0, min(s, ncols) + 1))
        planted = tuple(sorted(rng.choice(ncols, size=size, replace=False).tolist()))
        errors = int(rng.integers(0, t + 1)) if num_errors is None else num_errors
        errors = min(errors, design.num_rows)
        clean = true_outcomes(design, planted)
        noisy = inject_errors(design, clean, errors, policy, rng, planted)
        result = decode(design, noisy.bits, t)
        summary.records.append(TrialRecord(
            trial=j, planted=planted, num_errors=errors,
            decoded=tuple(sorted(result.decoded)),
            margin=_margin(result.mismatches, planted, t), seed=trial_seed))
    return summary


@dataclass
class SweepResult:
    planted_sets: int
    failures: list[tuple[tuple[int, ...], int]]

    @property
    def ok(self) -> bool:
        return not self.failures


def sweep_recovery(design: SupportMatrix, s: int, t: int, max_failures: int = 10) -> SweepResult:
    """Check exact recovery for every planted set of size <= s and every
    pattern of at most t flipped outcomes.

    Error patterns are not enumerated one by one.  For a fixed planted set P
    with outcome U, a planted item sees at most t mismatches under any
    pattern, and the pattern most favourable to a non-planted item c flips
    min(t, m_c) of its negative pools, where m_c = |S_c minus U|.  So every
    pattern decodes to P iff m_c >= 2t + 1 for all c outside P.  m_c for a
    column that misses some member of P equals its value for a smaller
    planted set, which the sweep has already checked, so at each P only
    columns meeting every member are recomputed.  `sweep_recovery_brute`
    enumerates the patterns literally and must agree.
    """
    supports = design.supports()
    ncols = len(supports)
    need = 2 * t + 1
    neighbours = [set() for _ in range(ncols)]
    for a in range(ncols):
        Sa = supports[a]
        for b in range(a + 1, ncols):
            if Sa & supports[b]:
                neighbours[a].add(b)
                neighbours[b].add(a)
    failures: list[tuple[tuple[int, ...], int]] = []
    count = 0
    for size in range(0, min(s, ncols) + 1):
        for P in combinations(range(ncols), size):
            count += 1
            if len(failures) >= max_failures:
                continue
            if size == 0:
                check = range(ncols)
                U = 0
            else:
                common = set.intersection(*(neighbours[p] for p in P)) - set(P)
                if not common:
                    continue
                check = sorted(common)
                U = 0
                for p in P:
                    U |= supports[p]
            for c in check:
                if (supports[c] & ~U).bit_count() < need:
                    failures.append((P, c))
                    break
    return SweepResult(count, failures)


def sweep_recovery_brute(design: SupportMatrix, s: int, t: int,
                         planted_sets: Optional[Iterable[Sequence[int]]] = None) -> SweepResult:
    """Literal decode of every planted set against every error pattern of size <= t."""
    ncols, nrows = design.num_cols, design.num_rows
    if planted_sets is None:
        planted_sets = (P for size in range(min(s, ncols) + 1)
                        for P in combinations(range(ncols), size))
    failures = []
    count = 0
    for P in planted_sets:
        P = tuple(P)
        count += 1
        clean = true_outcomes(design, P)
        for size in range(t + 1):
            for R in combinations(range(nrows), size):
                flip = 0
                for r in R:
                    flip |= 1 << r
                if decode(design, clean ^ flip, t).decoded != frozenset(P):
                    failures.append((P, R))
    return SweepResult(count, failures)


def find_failure(design: SupportMatrix, designated: int, others: Sequence[int],
                 threshold: int) -> TrialRecord:
    """Build a failing decode from a disjunctness witness.

    Plant the witness's other columns and flip just enough of the designated
    column's private pools that it falls within the threshold.  The flip count
    is (private pools - threshold), so t+1 flips suffice when e = 2t.
    """
    supports = design.supports()
    planted = tuple(sorted(others))
    clean = true_outcomes(design, planted)
    private = list(bitset.iter_indices(supports[designated] & ~clean))
    flips_needed = max(0, len(private) - threshold)
    noisy = clean
    for r in private[:flips_needed]:
        noisy ^= 1 << r
    result = decode(design, noisy, threshold)
    return TrialRecord(trial=0, planted=planted, num_errors=flips_needed,
                       decoded=tuple(sorted(result.decoded)),
                       margin=_margin(result.mismatches, planted, threshold), seed=[])
