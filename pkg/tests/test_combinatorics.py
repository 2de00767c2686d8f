import pytest
from hypothesis import given, strategies as st

from oracles import colex_subsets, pascal
from pooldesign.combinatorics import (
    Subset,
    binom,
    iter_masks,
    iter_subsets,
    rank_colex,
    unrank_colex,
)


@pytest.mark.parametrize("n,k,expected", [(5, 0, 1), (13, 5, 1287), (50, 7, 99884400)])
def test_binom_values(n, k, expected):
    assert binom(n, k) == expected == pascal(n, k)


def test_binom_out_of_range_is_zero():
    assert binom(3, 5) == 0
    assert binom(3, -1) == 0


def test_binom_matches_pascal_table():
    for n in range(61):
        for k in range(n + 2):
            assert binom(n, k) == pascal(n, k)
            if n >= 1:
                assert binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k)


def test_binom_is_exact_for_large_values():
    assert binom(200, 100) == pascal(200, 100)


@pytest.mark.parametrize("members,n,rank", [
    ((0, 1, 2), 10, 0),
    ((0, 2), 4, 1),
    ((2, 3), 4, 5),
])
def test_rank_examples(members, n, rank):
    s = Subset.of(members, n)
    assert rank_colex(s) == rank
    assert unrank_colex(rank, len(members), n) == s


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        unrank_colex(6, 2, 4)
    with pytest.raises(ValueError):
        unrank_colex(-1, 2, 4)


def test_rank_is_independent_of_ground_size():
    assert rank_colex(Subset.of((1, 4), 5)) == rank_colex(Subset.of((1, 4), 30))


def test_rank_bijection_exhaustive():
    for n in range(13):
        for c in range(n + 1):
            expected = colex_subsets(c, n)
            got = [s.members for s in iter_subsets(c, n)]
            assert got == expected
            for r, members in enumerate(expected):
                s = Subset.of(members, n)
                assert rank_colex(s) == r
                assert unrank_colex(r, c, n) == s


@pytest.mark.parametrize("c,n,expected", [
    (2, 3, [(0, 1), (0, 2), (1, 2)]),
    (0, 5, [()]),
    (3, 3, [(0, 1, 2)]),
])
def test_iter_subsets_examples(c, n, expected):
    assert [s.members for s in iter_subsets(c, n)] == expected


def test_iter_masks_empty_when_too_large():
    assert list(iter_masks(4, 3)) == []


def test_subset_validation():
    with pytest.raises(ValueError):
        Subset(3, 0b1000)
    with pytest.raises(ValueError):
        Subset.of((1, 1), 4)
    s = Subset.of((0, 2), 4)
    assert s.cardinality == 2
    assert s.complement().members == (1, 3)
    assert s.one_based() == "{1,3}"


@given(st.integers(0, 40).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, n))).flatmap(
    lambda nc: st.tuples(st.just(nc[0]), st.just(nc[1]),
                         st.integers(0, max(0, binom(nc[0], nc[1]) - 1)))))
def test_unrank_rank_roundtrip(args):
    n, c, r = args
    s = unrank_colex(r, c, n)
    assert s.cardinality == c
    assert rank_colex(s) == r


@given(st.sets(st.integers(0, 59), max_size=12))
def test_rank_roundtrip_from_subset(members):
    s = Subset.of(members, 60)
    assert unrank_colex(rank_colex(s), len(members), 60) == s
    assert 0 <= rank_colex(s) < max(1, binom(60, len(members)))
