"""Binomial coefficients and colex ranking of fixed-size subsets.

Subsets of the ground set {0, ..., n-1} are carried as int bitmasks: bit j is
set iff j is a member.  The colex rank of a c-subset with sorted members
e_0 < e_1 < ... < e_{c-1} is sum_j binom(e_j, j + 1), which does not depend on n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient; zero when k < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def members_of(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for m in members:
        mask |= 1 << m
    return mask


@dataclass(frozen=True)
class Subset:
    ground_size: int
    mask: int

    def __post_init__(self):
        if self.ground_size < 0:
            raise ValueError("ground size must be non-negative")
        if self.mask < 0 or self.mask >> self.ground_size:
            raise ValueError(f"members must lie in 0..{self.ground_size - 1}")

    @classmethod
    def of(cls, members: Iterable[int], ground_size: int) -> "Subset":
        members = list(members)
        if len(set(members)) != len(members):
            raise ValueError(f"repeated members in {members}")
        return cls(ground_size, mask_of(members))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(members_of(self.mask))

    @property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def complement(self) -> "Subset":
        return Subset(self.ground_size, ((1 << self.ground_size) - 1) & ~self.mask)

    def one_based(self) -> str:
        """Render as the 1-based set notation used at the user boundary."""
        return "{" + ",".join(str(m + 1) for m in self.members) + "}"

    def __len__(self) -> int:
        return self.cardinality

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)


def rank_mask(mask: int) -> int:
    rank = 0
    j = 1
    e = 0
    while mask:
        if mask & 1:
            rank += math.comb(e, j)
            j += 1
        mask >>= 1
        e += 1
    return rank


def unrank_mask(r: int, c: int, n: int) -> int:
    if r < 0 or r >= binom(n, c):
        raise ValueError(f"rank {r} out of range for {c}-subsets of {n} elements")
    mask = 0
    top = n
    for j in range(c, 0, -1):
        # largest e < top with binom(e, j) <= r
        top -= 1
        while math.comb(top, j) > r:
            top -= 1
        r -= math.comb(top, j)
        mask |= 1 << top
    return mask


def rank_colex(s: Subset) -> int:
    return rank_mask(s.mask)


def unrank_colex(r: int, c: int, n: int) -> Subset:
    return Subset(n, unrank_mask(r, c, n))


def iter_masks(c: int, n: int) -> Iterator[int]:
    """All c-subsets of range(n) as bitmasks, in colex order."""
    if c < 0 or c > n:
        return
    if c == 0:
        yield 0
        return
    # Gosper's hack: next larger integer with the same popcount is the next colex subset
    x = (1 << c) - 1
    limit = 1 << n
    while x < limit:
        yield x
        low = x & -x
        ripple = x + low
        x = ripple | (((x ^ ripple) >> 2) // low)


def iter_subsets(c: int, n: int) -> Iterator[Subset]:
    for mask in iter_masks(c, n):
        yield Subset(n, mask)


def sub_masks(universe: int, size: int) -> list[int]:
    """All size-subsets of the members of `universe`, as masks."""
    elems = [1 << e for e in members_of(universe)]
    return [sum(combo) for combo in combinations(elems, size)]
