"""Reference computations that share no code path with the package.

Subsets are plain tuples enumerated with itertools and sorted into colex
order by key; binomials come from a Pascal table; disjunctness is computed
on a dense numpy matrix without any pruning.
"""
from functools import lru_cache
from itertools import combinations

import numpy as np


@lru_cache(maxsize=None)
def pascal(n, k):
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return pascal(n - 1, k - 1) + pascal(n - 1, k)


def colex_subsets(c, n):
    return sorted(combinations(range(n), c), key=lambda t: tuple(reversed(t)))


def naive_matrix(n, d, k, I):
    rows = colex_subsets(d, n)
    cols = colex_subsets(k, n)
    out = np.zeros((len(rows), len(cols)), dtype=bool)
    for r, A in enumerate(rows):
        A = set(A)
        for c, B in enumerate(cols):
            out[r, c] = len(A & set(B)) in I
    return out


def brute_t_min(dense, s):
    """min over designated c0 and s other columns of the private-row count."""
    nrows, ncols = dense.shape
    best = None
    for c0 in range(ncols):
        X = dense[dense[:, c0]]
        others = [c for c in range(ncols) if c != c0]
        if s == 1:
            t = int((~X[:, others]).sum(axis=0).min()) if X.shape[0] else 0
        elif s == 2:
            if X.shape[0] == 0:
                t = 0
            else:
                # float64 BLAS product is exact for counts far below 2**53
                Z = (~X[:, others]).astype(np.float64)
                G = np.rint(Z.T @ Z).astype(np.int64)
                G[np.diag_indices_from(G)] = nrows + 1
                t = int(G.min())
        else:
            t = min(int(np.all(~X[:, list(combo)], axis=1).sum())
                    for combo in combinations(others, s))
        best = t if best is None else min(best, t)
    return best


def brute_private(dense, designated, others):
    mask = dense[:, designated].copy()
    for o in others:
        mask &= ~dense[:, o]
    return int(mask.sum())
