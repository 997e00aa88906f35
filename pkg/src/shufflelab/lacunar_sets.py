"""Lacunar sets, the families L_n, and the total order on finite integer sets.

Finite integer sets are represented as sorted tuples.
"""

from __future__ import annotations

from functools import cmp_to_key, lru_cache
from itertools import combinations
from typing import Iterable

LESS, EQUAL, GREATER = -1, 0, 1


def intset(s: Iterable[int]) -> tuple:
    return tuple(sorted(set(s)))


def is_lacunar(s: Iterable[int]) -> bool:
    """True if no two consecutive integers both lie in ``s``."""
    s = set(s)
    return not any(x + 1 in s for x in s)


def shift(s: Iterable[int], p: int) -> tuple:
    return tuple(sorted(x + p for x in set(s)))


def set_compare(a: Iterable[int], b: Iterable[int]) -> int:
    """Compare two finite sets: A < B iff A != B and min(A ^ B) lies in A.

    Returns LESS, EQUAL or GREATER (-1, 0, 1).
    """
    a, b = set(a), set(b)
    diff = a ^ b
    if not diff:
        return EQUAL
    return LESS if min(diff) in a else GREATER


set_sort_key = cmp_to_key(set_compare)


@lru_cache(maxsize=None)
def enumerate_Ln(n: int) -> tuple:
    """Nonempty lacunar subsets of [n] in increasing set order; L_0 = (())."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ((),)
    found = []
    for k in range(1, (n + 1) // 2 + 1):
        for c in combinations(range(1, n + 1), k):
            if is_lacunar(c):
                found.append(c)
    return tuple(sorted(found, key=set_sort_key))


def in_Ln(n: int, s: Iterable[int]) -> bool:
    s = intset(s)
    if n == 0:
        return s == ()
    return bool(s) and s[0] >= 1 and s[-1] <= n and is_lacunar(s)


def fibonacci(k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def subsets(n: int):
    """All subsets of [n] as sorted tuples, in binary-counter order."""
    for mask in range(1 << n):
        yield tuple(i + 1 for i in range(n) if mask >> i & 1)
