"""Intersection-based pooling designs and their error-tolerant disjunctness."""

from pooldesign.combinatorics import Subset, binom, iter_subsets, rank_colex, unrank_colex
from pooldesign.design import (
    DesignParams,
    InvalidParams,
    MemoryBudgetExceeded,
    PoolingDesign,
    SupportMatrix,
    build,
    col_weight,
    dual_params,
    row_weight,
    verify_duality,
)
from pooldesign.disjunct import (
    DisjunctReport,
    Inapplicable,
    exact_e_max,
    greedy_upper,
    private_rows,
    ratio_table,
    size_table,
    theorem_e1,
    theorem_e2,
)
from pooldesign.decode import (
    OutcomeVector,
    TrialRecord,
    TrialSummary,
    decode,
    inject_errors,
    run_trials,
    sweep_recovery,
    true_outcomes,
)

__all__ = [
    "Subset", "binom", "iter_subsets", "rank_colex", "unrank_colex",
    "DesignParams", "InvalidParams", "MemoryBudgetExceeded", "PoolingDesign",
    "SupportMatrix", "build", "col_weight", "dual_params", "row_weight",
    "verify_duality",
    "DisjunctReport", "Inapplicable", "exact_e_max", "greedy_upper",
    "private_rows", "ratio_table", "size_table", "theorem_e1", "theorem_e2",
    "OutcomeVector", "TrialRecord", "TrialSummary", "decode", "inject_errors",
    "run_trials", "sweep_recovery", "true_outcomes",
]
