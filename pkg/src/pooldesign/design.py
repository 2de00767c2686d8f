"""Intersection matrices M(I; d, k, n) over subsets of a finite set.

Rows are the d-subsets of {0..n-1}, columns the k-subsets, both indexed by
colex rank.  Entry (A, B) is 1 iff |A & B| lies in the intersection set I.
The matrix is held column-major: each column is an int bitset over row ranks.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import IO, Iterable, Iterator, Optional

import numpy as np

from pooldesign import bitset
from pooldesign.combinatorics import (
    binom,
    iter_masks,
    members_of,
    rank_mask,
    sub_masks,
    unrank_mask,
)

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
# beyond this many rows a rank lookup table costs more than it saves
_ROW_TABLE_LIMIT = 1 << 21


class InvalidParams(ValueError):
    pass


class MemoryBudgetExceeded(RuntimeError):
    pass


class Inapplicable(ValueError):
    """A formula or transform whose stated preconditions do not hold."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class DesignParams:
    n: int
    d: int
    k: int
    I: frozenset

    def __post_init__(self):
        object.__setattr__(self, "I", frozenset(self.I))
        if not 1 <= self.d < self.k < self.n:
            raise InvalidParams(
                f"need 1 <= d < k < n, got d={self.d}, k={self.k}, n={self.n}")
        if not self.I:
            raise InvalidParams("intersection set I must be nonempty")
        if any(not 0 <= i <= self.d for i in self.I):
            raise InvalidParams(f"every i in I must satisfy 0 <= i <= d={self.d}")
        if len(self.I) == self.d + 1:
            raise InvalidParams("I must be a proper subset of {0..d}")

    @classmethod
    def containment(cls, d: int, k: int, n: int) -> "DesignParams":
        return cls(n, d, k, frozenset({d}))

    @classmethod
    def exact_intersection(cls, i: int, d: int, k: int, n: int) -> "DesignParams":
        return cls(n, d, k, frozenset({i}))

    @classmethod
    def intersection_set(cls, I: Iterable[int], d: int, k: int, n: int) -> "DesignParams":
        return cls(n, d, k, frozenset(I))

    @property
    def num_rows(self) -> int:
        return binom(self.n, self.d)

    @property
    def num_cols(self) -> int:
        return binom(self.n, self.k)

    @property
    def is_containment(self) -> bool:
        return self.I == {self.d}

    @property
    def singleton(self) -> Optional[int]:
        return next(iter(self.I)) if len(self.I) == 1 else None

    def label(self) -> str:
        if self.is_containment:
            return f"M({self.d},{self.k},{self.n})"
        if self.singleton is not None:
            return f"M({self.singleton};{self.d},{self.k},{self.n})"
        return "M({" + ",".join(map(str, sorted(self.I))) + f"}};{self.d},{self.k},{self.n})"


def row_weight(params: DesignParams) -> int:
    n, d, k = params.n, params.d, params.k
    return sum(binom(d, i) * binom(n - d, k - i) for i in params.I)


def col_weight(params: DesignParams) -> int:
    n, d, k = params.n, params.d, params.k
    return sum(binom(k, i) * binom(n - k, d - i) for i in params.I)


class SupportMatrix:
    """A binary matrix stored as one row-support bitset per column."""

    def __init__(self, num_rows: int, supports: list[int]):
        self.num_rows = num_rows
        self._supports = supports

    @property
    def num_cols(self) -> int:
        return len(self._supports)

    def column_support(self, col: int) -> int:
        if not 0 <= col < self.num_cols:
            raise IndexError(f"column rank {col} out of range 0..{self.num_cols - 1}")
        return self._supports[col]

    def supports(self) -> list[int]:
        return self._supports

    def describe_column(self, col: int) -> str:
        return f"#{col}"

    def entries(self) -> Iterator[tuple[int, int]]:
        """(row, col) of every 1-entry, sorted by (col, row)."""
        for c, sup in enumerate(self.supports()):
            for r in bitset.iter_indices(sup):
                yield r, c

    def to_dense(self) -> np.ndarray:
        return bitset.to_bool_matrix(self.supports(), self.num_rows).T

    def row_supports(self) -> list[int]:
        dense = self.to_dense()
        return [bitset.from_bool_array(row) for row in dense]

    def row_popcounts(self) -> np.ndarray:
        counts = np.zeros(self.num_rows, dtype=np.int64)
        sups = self.supports()
        step = max(1, 4_000_000 // max(1, self.num_rows))
        for lo in range(0, len(sups), step):
            counts += bitset.to_bool_matrix(sups[lo:lo + step], self.num_rows).sum(axis=0)
        return counts


@lru_cache(maxsize=256)
def _combo_index(m: int, r: int) -> np.ndarray:
    """All r-combinations of range(m) as a (C(m, r), r) index array."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    flat = np.fromiter((x for c in combinations(range(m), r) for x in c), dtype=np.int64)
    return flat.reshape(-1, r)


@lru_cache(maxsize=64)
def _rank_table(n: int, d: int) -> np.ndarray:
    """table[e, j] = C(e, j + 1): the colex rank contribution of element e at position j."""
    return np.array([[binom(e, j + 1) for j in range(d)] for e in range(n)], dtype=np.int64)


class PoolingDesign(SupportMatrix):
    def __init__(self, params: DesignParams, mode: str = "dense",
                 memory_budget: int = DEFAULT_MEMORY_BUDGET):
        if mode not in ("dense", "lazy"):
            raise ValueError(f"unknown mode {mode!r}")
        self.params = params
        self.mode = mode
        self.num_rows = params.num_rows
        self._full = (1 << params.n) - 1
        self._row_index = None
        self._vector = self.num_rows < 2**62
        if not self._vector and self.num_rows <= _ROW_TABLE_LIMIT:
            self._row_index = {m: r for r, m in enumerate(iter_masks(params.d, params.n))}
        self._supports = None
        if mode == "dense":
            need = dense_bytes(params)
            if need > memory_budget:
                raise MemoryBudgetExceeded(
                    f"{params.label()} needs ~{need} bytes dense, budget is {memory_budget}; "
                    "use lazy mode")
            self._supports = self._all_supports()

    @property
    def num_cols(self) -> int:
        return self.params.num_cols

    def _rank(self, mask: int) -> int:
        if self._row_index is not None:
            return self._row_index[mask]
        return rank_mask(mask)

    def support_rows(self, col: int) -> list[int]:
        """Row ranks of the column, enumerated without scanning all rows.

        Each row D with |D & B| = i splits as an i-subset of B plus a
        (d-i)-subset of the complement of B.
        """
        p = self.params
        B = unrank_mask(col, p.k, p.n)
        if self._vector:
            return self._support_rows_np(B).tolist()
        comp = self._full & ~B
        rows = []
        for i in sorted(p.I):
            inner = sub_masks(B, i)
            outer = sub_masks(comp, p.d - i)
            rows.extend(self._rank(a | b) for a in inner for b in outer)
        rows.sort()
        return rows

    def _support_rows_np(self, B: int) -> np.ndarray:
        p = self.params
        member = bitset.to_bool_array(B, p.n)
        inside = np.flatnonzero(member)
        outside = np.flatnonzero(~member)
        table = _rank_table(p.n, p.d)
        pos = np.arange(p.d)
        parts = []
        for i in sorted(p.I):
            a = inside[_combo_index(p.k, i)]
            b = outside[_combo_index(p.n - p.k, p.d - i)]
            if a.shape[0] == 0 or b.shape[0] == 0:
                continue
            rows = np.concatenate([np.repeat(a, b.shape[0], axis=0), np.tile(b, (a.shape[0], 1))], axis=1)
            rows.sort(axis=1)
            parts.append(table[rows, pos].sum(axis=1))
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate(parts))

    def _compute_support(self, col: int) -> int:
        if self._vector:
            B = unrank_mask(col, self.params.k, self.params.n)
            rows = self._support_rows_np(B)
            return bitset.from_indices(rows, self.num_rows)
        return bitset.from_indices(self.support_rows(col), self.num_rows)

    def column_support(self, col: int) -> int:
        if not 0 <= col < self.num_cols:
            raise IndexError(f"column rank {col} out of range 0..{self.num_cols - 1}")
        if self._supports is not None:
            return self._supports[col]
        return self._compute_support(col)

    def supports(self) -> list[int]:
        if self._supports is None:
            self._supports = self._all_supports()
        return self._supports

    def _all_supports(self) -> list[int]:
        if not self._vector:
            return [self._compute_support(c) for c in range(self.num_cols)]
        p = self.params
        weight = col_weight(p)
        chunk = max(1, min(4_000_000 // max(1, weight * p.d), 8_000_000 // max(1, self.num_rows)))
        masks = iter_masks(p.k, p.n)
        out: list[int] = []
        while len(out) < self.num_cols:
            batch = [B for _, B in zip(range(chunk), masks)]
            out.extend(self._batch_supports(batch, weight))
        return out

    def _batch_supports(self, batch: list[int], weight: int) -> list[int]:
        """Column supports for many columns at once, same composition as a single column."""
        p = self.params
        m = len(batch)
        if p.n <= 63:
            member = (np.array(batch, dtype=np.uint64)[:, None] >> np.arange(p.n, dtype=np.uint64)) & np.uint64(1)
            member = member.astype(bool)
        else:
            member = np.array([bitset.to_bool_array(B, p.n) for B in batch])
        inside = np.nonzero(member)[1].reshape(m, p.k)
        outside = np.nonzero(~member)[1].reshape(m, p.n - p.k)
        table = _rank_table(p.n, p.d)
        pos = np.arange(p.d)
        parts = []
        for i in sorted(p.I):
            ci, co = _combo_index(p.k, i), _combo_index(p.n - p.k, p.d - i)
            if ci.shape[0] == 0 or co.shape[0] == 0:
                continue
            a = np.repeat(inside[:, ci], co.shape[0], axis=1)
            b = np.tile(outside[:, co], (1, ci.shape[0], 1))
            rows = np.concatenate([a, b], axis=2)
            rows.sort(axis=2)
            parts.append(table[rows, pos].sum(axis=2))
        dense = np.zeros((m, self.num_rows), dtype=bool)
        if parts:
            ranks = np.concatenate(parts, axis=1)
            dense[np.arange(m)[:, None], ranks] = True
        packed = np.packbits(dense, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]

    def entry(self, row: int, col: int) -> bool:
        p = self.params
        A = unrank_mask(row, p.d, p.n)
        B = unrank_mask(col, p.k, p.n)
        return (A & B).bit_count() in p.I

    def row_subset(self, row: int) -> list[int]:
        return members_of(unrank_mask(row, self.params.d, self.params.n))

    def col_subset(self, col: int) -> list[int]:
        return members_of(unrank_mask(col, self.params.k, self.params.n))

    def describe_column(self, col: int) -> str:
        return "{" + ",".join(str(m + 1) for m in self.col_subset(col)) + "}"


def dense_bytes(params: DesignParams) -> int:
    return params.num_rows * params.num_cols // 8 + 1


def build(params: DesignParams, mode: str = "dense",
          memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PoolingDesign:
    return PoolingDesign(params, mode, memory_budget)


def dual_params(params: DesignParams) -> DesignParams:
    """M(i; d, k, n) = M(d-i; d, n-k, n) under B -> complement of B."""
    i = params.singleton
    if i is None:
        raise Inapplicable("duality needs a singleton intersection set")
    n, d, k = params.n, params.d, params.k
    if not n > k + d - i:
        raise Inapplicable(f"need n > k + d - i, got {n} <= {k + d - i}")
    if not d < n - k:
        raise Inapplicable(f"dual column size n-k={n - k} must exceed d={d}")
    return DesignParams.exact_intersection(d - i, d, n - k, n)


def verify_duality(params: DesignParams) -> int:
    """Number of entries where M(params) and its dual disagree (0 = identical)."""
    dual = dual_params(params)
    left = build(params)
    right = build(dual)
    full = (1 << params.n) - 1
    mismatches = 0
    for col, mask in enumerate(iter_masks(params.k, params.n)):
        dual_col = rank_mask(full & ~mask)
        mismatches += (left.column_support(col) ^ right.column_support(dual_col)).bit_count()
    return mismatches


# -- export / import -------------------------------------------------------

def metadata(design: PoolingDesign) -> dict:
    p = design.params
    return {"n": p.n, "d": p.d, "k": p.k, "I": sorted(p.I),
            "rows": design.num_rows, "cols": design.num_cols,
            "row_weight": row_weight(p), "col_weight": col_weight(p)}


def write_dense_text(matrix: SupportMatrix, fh: IO[str]) -> None:
    dense = matrix.to_dense()
    for row in dense:
        fh.write("".join("1" if b else "0" for b in row))
        fh.write("\n")


def write_sparse_csv(matrix: SupportMatrix, fh: IO[str]) -> None:
    fh.write("row,col\n")
    for r, c in matrix.entries():
        fh.write(f"{r},{c}\n")


def read_sparse_csv(fh: IO[str], num_rows: Optional[int] = None,
                    num_cols: Optional[int] = None) -> SupportMatrix:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["row", "col"]:
        raise ValueError("sparse CSV must start with header 'row,col'")
    cols: dict[int, list[int]] = {}
    max_row = -1
    for line in reader:
        if not line:
            continue
        r, c = int(line[0]), int(line[1])
        if r < 0 or c < 0:
            raise ValueError(f"negative rank in line {line}")
        cols.setdefault(c, []).append(r)
        max_row = max(max_row, r)
    rows = num_rows if num_rows is not None else max_row + 1
    ncols = num_cols if num_cols is not None else (max(cols) + 1 if cols else 0)
    if max_row >= rows or (cols and max(cols) >= ncols):
        raise ValueError("entry outside declared matrix shape")
    supports = [bitset.from_indices(cols.get(c, ()), rows) for c in range(ncols)]
    return SupportMatrix(rows, supports)


def load_matrix(path: str) -> SupportMatrix:
    """Read a sparse CSV, taking its shape from a `.meta.json` sidecar if present."""
    num_rows = num_cols = None
    sidecar = path + ".meta.json"
    if os.path.exists(sidecar):
        with open(sidecar) as fh:
            meta = json.load(fh)
        num_rows, num_cols = meta["rows"], meta["cols"]
    with open(path, newline="") as fh:
        return read_sparse_csv(fh, num_rows, num_cols)
