"""Exit criteria for the package, one test per criterion.

Every test appends a PASS/FAIL line to RESULTS; conftest prints them at the
end of the session.  Run alone with `pytest tests/test_acceptance.py -s`.
"""
import json
import time
from itertools import combinations

import numpy as np
import pytest

from oracles import brute_private, brute_t_min, naive_matrix
from pooldesign.cli import main
from pooldesign.combinatorics import binom
from pooldesign.decode import run_trials, sweep_recovery, sweep_recovery_brute
from pooldesign.design import DesignParams, Inapplicable, build, col_weight, dual_params, row_weight, verify_duality
from pooldesign.disjunct import exact_e_max, greedy_upper, ratio_table, theorem_e2

RESULTS = []


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def m4_5_13():
    return build(DesignParams.containment(4, 5, 13))


@pytest.fixture(scope="module")
def m3_4_5_13():
    return build(DesignParams.exact_intersection(3, 4, 5, 13))


def test_1_formula_reproduction(capsys):
    cases = [
        (["--n", "50", "--k", "7", "--d", "5", "--i", "3", "--s", "1..3"], [14, 9, 5], [9989, 2324, 299]),
        (["--n", "13", "--k", "5", "--d", "4", "--i", "3", "--s", "1..2"], [3, 2], [29, 5]),
    ]
    start = time.perf_counter()
    got = []
    for argv, e1, e2 in cases:
        assert main(["bounds", *argv, "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        got.append(([r["e1"] for r in rows], [r["e2"] for r in rows]))
    elapsed = time.perf_counter() - start
    expected = [(e1, e2) for _, e1, e2 in cases]
    ok = got == expected and elapsed < 1.0
    assert report(1, "formula reproduction", ok, f"values {got}, {elapsed:.3f}s (< 1s)")


def test_2_exact_fully_claims(m4_5_13):
    start = time.perf_counter()
    design = build(DesignParams.containment(4, 5, 13))
    reps = [exact_e_max(design, s, workers=1) for s in (1, 2)]
    elapsed = time.perf_counter() - start
    unpruned = [1287 * binom(1286, s) for s in (1, 2)]
    ok = ([r.e for r in reps] == [3, 2] and all(r.exact for r in reps)
          and all(r.evaluations < u for r, u in zip(reps, unpruned)) and elapsed < 60)
    assert report(2, "exact e_max on M(4,5,13)", ok,
                  f"e_max(1)={reps[0].e}, e_max(2)={reps[1].e}, "
                  f"evaluations {[r.evaluations for r in reps]} vs unpruned {unpruned}, {elapsed:.2f}s (< 60s)")


def soundness_grid():
    for n in range(3, 12):
        for d in range(1, 5):
            for k in range(d + 1, n):
                for i in range((d + 1) // 2, d + 1):
                    for s in range(1, min(i, 2) + 1):
                        try:
                            yield n, d, k, i, s, theorem_e2(s, i, d, k, n)
                        except Inapplicable:
                            pass


def test_3_soundness_sweep():
    start = time.perf_counter()
    cases = list(soundness_grid())
    violations = []
    tight = 0
    for n, d, k, i, s, e2 in cases:
        rep = exact_e_max(build(DesignParams.exact_intersection(i, d, k, n)), s, workers=1)
        assert rep.exact
        if rep.e < e2:
            violations.append((n, d, k, i, s, rep.e, e2))
        tight += rep.e == e2
    elapsed = time.perf_counter() - start
    ok = not violations and len(cases) > 0
    assert report(3, "Theorem soundness sweep n<=11, d<=4", ok,
                  f"{len(cases)} tuples, {len(violations)} violations, {tight} tight, {elapsed:.1f}s")


def test_4_lower_bound_large_small_case(m3_4_5_13):
    start = time.perf_counter()
    scan = greedy_upper(m3_4_5_13, 1)        # every designated column against every other: full pair scan
    exact = exact_e_max(m3_4_5_13, 1, workers=1)
    elapsed = time.perf_counter() - start
    dense = m3_4_5_13.to_dense()
    witness_ok = brute_private(dense, scan.designated, scan.others) == scan.t_min
    ok = scan.e == exact.e >= 29 and witness_ok and elapsed < 300
    assert report(4, "exact e_max(1) of M(3;4,5,13) vs bound 29", ok,
                  f"exact e={scan.e}, gap {scan.e - 29}, {elapsed:.1f}s (< 300s)")


def test_5_duality():
    checked = mismatches = 0
    for n in range(3, 12):
        for k in range(2, n):
            for d in range(1, k):
                for i in range(d + 1):
                    p = DesignParams.exact_intersection(i, d, k, n)
                    try:
                        dual_params(p)
                    except Inapplicable:
                        continue
                    mismatches += verify_duality(p)
                    checked += 1
    ok = checked > 0 and mismatches == 0
    assert report(5, "duality under complement bijection, n<=11", ok,
                  f"{checked} parameter sets, {mismatches} mismatched entries")


def weight_grid(max_cells=10**6, max_n=1000):
    # d=1, k=n-1 has n^2 cells, so n never exceeds 1000
    for n in range(3, max_n + 1):
        for k in range(2, n):
            if binom(n, k) > max_cells:
                continue
            for d in range(1, k):
                if binom(n, d) * binom(n, k) > max_cells:
                    if d < n // 2:
                        break
                    continue
                yield n, d, k


def test_6_weight_formulas():
    start = time.perf_counter()
    checked = bad = 0
    for n, d, k in weight_grid():
        sets = [{i} for i in range(d + 1)]
        if d <= 2 and n <= 12:
            sets += [set(I) for r in range(2, d + 1) for I in combinations(range(d + 1), r)]
        for I in sets:
            p = DesignParams.intersection_set(I, d, k, n)
            dz = build(p)
            cols = {s.bit_count() for s in dz.supports()}
            rows = set(dz.row_popcounts().tolist())
            checked += 1
            bad += cols != {col_weight(p)} or rows != {row_weight(p)}
    elapsed = time.perf_counter() - start
    assert report(6, "row/column weight formulas, <=1e6 cells", bad == 0 and checked > 0,
                  f"{checked} designs, {bad} mismatches, {elapsed:.1f}s")


def test_7_error_correction(m3_4_5_13, m4_5_13):
    start = time.perf_counter()
    a = run_trials(m3_4_5_13, 1, 29, 1000, seed=2024, num_errors=14)
    b = run_trials(m3_4_5_13, 2, 5, 1000, seed=2024, num_errors=2)
    sweep = sweep_recovery(m4_5_13, 2, 1)
    literal = sweep_recovery_brute(m4_5_13, 2, 1, [(), (0,), (0, 1), (0, 1286), (100, 101)])
    elapsed = time.perf_counter() - start
    ok = (a.recovery_rate == 1.0 and b.recovery_rate == 1.0 and sweep.ok and literal.ok
          and sweep.planted_sets == 1 + 1287 + binom(1287, 2) and elapsed < 600)
    assert report(7, "error-correction round trip", ok,
                  f"M(3;4,5,13) s=1/14 errors rate {a.recovery_rate}, s=2/2 errors rate {b.recovery_rate}; "
                  f"M(4,5,13) sweep over {sweep.planted_sets} planted sets x all <=1-error patterns "
                  f"ok={sweep.ok}; {elapsed:.1f}s (< 600s)")


def test_8_ratio_divergence():
    rows = ratio_table(5, 7, 3, 1, [50, 100, 200, 400])
    ratios = [r.ratio for r in rows]
    increasing = all(x is not None for x in ratios) and all(x < y for x, y in zip(ratios, ratios[1:]))
    ok = increasing and ratios[-1] > 10**4
    assert report(8, "ratio (e2+1)/(e1+1) diverges", ok,
                  "ratios " + ", ".join(f"n={r.n}: {float(r.ratio):.1f}" for r in rows))


def oracle_grid(max_cols=200, max_rows=200):
    for n in range(3, max(max_cols, max_rows) + 1):
        for k in range(2, n):
            if binom(n, k) > max_cols:
                continue
            for d in range(1, k):
                if binom(n, d) > max_rows:
                    continue
                sets = [{i} for i in range(d + 1)]
                if d <= 2:
                    sets += [set(I) for r in range(2, d + 1) for I in combinations(range(d + 1), r)]
                for I in sets:
                    yield n, d, k, I


def test_9_oracle_equivalence():
    start = time.perf_counter()
    designs = searches = bad_matrix = bad_search = 0
    for n, d, k, I in oracle_grid():
        dz = build(DesignParams.intersection_set(I, d, k, n))
        dense = naive_matrix(n, d, k, I)
        designs += 1
        bad_matrix += not np.array_equal(dz.to_dense(), dense)
        s_values = [1, 2] + ([3] if dz.num_cols <= 30 else [])
        for s in s_values:
            if dz.num_cols <= s:
                continue
            rep = exact_e_max(dz, s, workers=1)
            searches += 1
            bad_search += rep.t_min != brute_t_min(dense, s)
    elapsed = time.perf_counter() - start
    ok = designs > 0 and bad_matrix == 0 and bad_search == 0
    assert report(9, "pruned search and construction vs naive oracles", ok,
                  f"{designs} designs, {searches} searches, {bad_matrix} matrix / {bad_search} search "
                  f"mismatches, {elapsed:.1f}s")
