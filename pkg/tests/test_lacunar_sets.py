from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from shufflelab.lacunar_sets import (
    EQUAL,
    GREATER,
    LESS,
    enumerate_Ln,
    fibonacci,
    in_Ln,
    is_lacunar,
    set_compare,
    shift,
    subsets,
)

small_sets = st.frozensets(st.integers(1, 12), max_size=6)


def test_lacunar_examples():
    assert is_lacunar({2, 5, 7})
    assert not is_lacunar({2, 5, 6})
    assert is_lacunar(set())


def test_small_Ln():
    assert set(enumerate_Ln(3)) == {(1,), (2,), (3,), (1, 3)}
    assert enumerate_Ln(0) == ((),)
    assert set(enumerate_Ln(2)) == {(1,), (2,)}
    assert enumerate_Ln(1) == ((1,),)
    # listed in increasing set order
    assert enumerate_Ln(3) == ((1, 3), (1,), (2,), (3,))


def test_Ln_sizes_are_fibonacci():
    assert [fibonacci(k) for k in range(11)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    for n in range(1, 13):
        assert len(enumerate_Ln(n)) == fibonacci(n + 2) - 1


def test_Ln_brute_force():
    for n in range(1, 9):
        brute = {
            c for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)
            if all(b - a > 1 for a, b in zip(c, c[1:]))
        }
        assert set(enumerate_Ln(n)) == brute
        assert all(in_Ln(n, s) for s in brute)
    assert not in_Ln(3, ())
    assert in_Ln(0, ())
    assert not in_Ln(3, (4,))


def test_set_compare_examples():
    assert set_compare({2, 5}, {2, 6}) == LESS
    assert set_compare({1, 3}, {1, 3}) == EQUAL
    assert set_compare({2}, {1, 3}) == GREATER


def test_shift():
    assert shift({2, 5}, 1) == (3, 6)
    assert shift(set(), 7) == ()
    assert shift({1, 3}, 3) == (4, 6)


@given(small_sets, small_sets)
def test_set_compare_antisymmetric(a, b):
    assert set_compare(a, b) == -set_compare(b, a)
    assert (set_compare(a, b) == EQUAL) == (a == b)


@given(small_sets, small_sets, small_sets)
def test_set_compare_transitive(a, b, c):
    if set_compare(a, b) == LESS and set_compare(b, c) == LESS:
        assert set_compare(a, c) == LESS


def test_subsets_binary_counter():
    assert list(subsets(2)) == [(), (1,), (2,), (1, 2)]
    with pytest.raises(ValueError):
        enumerate_Ln(-1)
