"""Permutations as words of distinct positive integers, and their statistics.

A permutation is a plain tuple of distinct positive integers.  Set-valued
statistics are returned as sorted tuples so that they can be used directly as
multiset keys; compositions are tuples of parts; the joint statistic
``DesMaj`` is a pair.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

from .lacunar_sets import in_Ln

Permutation = tuple

SET_TAGS = ("Des", "Pk", "Lpk", "Rpk", "Epk")
STAT_TAGS = ("Des", "Pk", "Lpk", "Rpk", "Epk", "Comp", "des", "maj", "comaj", "DesMaj", "inv")
# statistics that factor through the descent composition
DESCENT_TAGS = tuple(t for t in STAT_TAGS if t != "inv")


class LetterError(ValueError):
    pass


def as_perm(word: Iterable[int]) -> Permutation:
    """Validate ``word`` and return it as a tuple."""
    p = tuple(word)
    for x in p:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise LetterError(f"letters must be positive integers, got {x!r}")
    if len(set(p)) != len(p):
        raise LetterError(f"letters must be distinct: {p}")
    return p


def check_tag(tag: str) -> str:
    if tag not in STAT_TAGS:
        raise ValueError(f"unknown statistic {tag!r}; expected one of {', '.join(STAT_TAGS)}")
    return tag


def descents(p: Sequence[int]) -> tuple:
    return tuple(i for i in range(1, len(p)) if p[i - 1] > p[i])


def _padded_peaks(p: Sequence[int], left: bool, right: bool) -> tuple:
    # peaks of 0,p,0 with the chosen boundary letters
    n = len(p)
    lo = 1 if left else 2
    hi = n if right else n - 1
    out = []
    for i in range(lo, hi + 1):
        before = p[i - 2] if i >= 2 else 0
        after = p[i] if i < n else 0
        if before < p[i - 1] > after:
            out.append(i)
    return tuple(out)


def peaks(p):
    return _padded_peaks(p, False, False)


def left_peaks(p):
    return _padded_peaks(p, True, False)


def right_peaks(p):
    return _padded_peaks(p, False, True)


def exterior_peaks(p):
    return _padded_peaks(p, True, True)


def descent_composition(p: Sequence[int]) -> tuple:
    n = len(p)
    if n == 0:
        return ()
    cuts = (0,) + descents(p) + (n,)
    return tuple(b - a for a, b in zip(cuts, cuts[1:]))


def inversions(p: Sequence[int]) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def statistic(tag: str, p: Sequence[int]):
    """Evaluate the statistic ``tag`` on the permutation ``p``."""
    check_tag(tag)
    if tag == "Des":
        return descents(p)
    if tag == "Pk":
        return peaks(p)
    if tag == "Lpk":
        return left_peaks(p)
    if tag == "Rpk":
        return right_peaks(p)
    if tag == "Epk":
        return exterior_peaks(p)
    if tag == "Comp":
        return descent_composition(p)
    if tag == "inv":
        return inversions(p)
    des = descents(p)
    if tag == "des":
        return len(des)
    if tag == "maj":
        return sum(des)
    if tag == "comaj":
        return sum(len(p) - k for k in des)
    return (len(des), sum(des))  # DesMaj


def all_statistics(p: Sequence[int]) -> dict:
    return {t: statistic(t, p) for t in STAT_TAGS}


def epk_via_des(p: Sequence[int]) -> tuple:
    """Exterior peaks computed as (Des u {n}) minus (Des + 1)."""
    n = len(p)
    if n == 0:
        raise ValueError("epk_via_des needs a nonempty permutation")
    des = set(descents(p))
    return tuple(sorted((des | {n}) - {d + 1 for d in des}))


def head_graft(a: int, p: Sequence[int]) -> Permutation:
    """Return ``a:p``, the word with ``a`` prepended."""
    if a in p:
        raise LetterError(f"letter {a} already appears in {tuple(p)}")
    return as_perm((a,) + tuple(p))


def tail(p: Sequence[int]) -> Permutation:
    if len(p) == 0:
        raise ValueError("tail of the empty permutation")
    return tuple(p[1:])


def standardize(word: Sequence[int]) -> Permutation:
    """Replace each letter by its rank, giving a permutation of 1..n."""
    w = tuple(word)
    if len(set(w)) != len(w):
        raise LetterError(f"letters must be distinct: {w}")
    rank = {x: i + 1 for i, x in enumerate(sorted(w))}
    return tuple(rank[x] for x in w)


def order_isomorphic(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    n = len(a)
    return all((a[i] < a[j]) == (b[i] < b[j]) for i in range(n) for j in range(n))


def is_v_shaped(values: Sequence[int]) -> bool:
    """Strictly decreasing up to the minimum and strictly increasing after it."""
    v = tuple(values)
    if len(set(v)) != len(v):
        raise ValueError(f"values must be distinct: {v}")
    if not v:
        return True
    t = v.index(min(v))
    return all(v[i] > v[i + 1] for i in range(t)) and all(
        v[i] < v[i + 1] for i in range(t, len(v) - 1)
    )


def perm_from_epk(n: int, lam: Iterable[int]) -> Permutation:
    """A permutation of 1..n whose exterior peak set is ``lam``.

    The largest values go on ``lam`` from left to right in decreasing order.
    The remaining values fill the gaps, increasing on the first gap and
    decreasing on every later one.
    """
    lam = tuple(sorted(set(lam)))
    if not in_Ln(n, lam):
        raise ValueError(f"{set(lam) or '{}'} is not a member of L_{n}")
    if n == 0:
        return ()
    out = [0] * (n + 1)
    for i, u in enumerate(lam):
        out[u] = n - i
    bounds = (0,) + lam + (n + 1,)
    nxt = 1
    for k, (a, b) in enumerate(zip(bounds, bounds[1:])):
        gap = list(range(a + 1, b))
        vals = list(range(nxt, nxt + len(gap)))
        nxt += len(gap)
        if k > 0:
            vals.reverse()
        for pos, v in zip(gap, vals):
            out[pos] = v
    return tuple(out[1:])


def permutations_of(letters: Sequence[int]):
    return permutations(sorted(letters))


def standard_perms(n: int):
    """All permutations of 1..n in lexicographic order."""
    return permutations_of(range(1, n + 1))


def format_value(tag: str, value) -> str:
    if tag in SET_TAGS:
        return "{" + ",".join(map(str, value)) + "}"
    if tag == "Comp" or tag == "DesMaj":
        return "(" + ",".join(map(str, value)) + ")"
    return str(value)


def jsonable_value(tag: str, value):
    if isinstance(value, tuple):
        return list(value)
    return value
