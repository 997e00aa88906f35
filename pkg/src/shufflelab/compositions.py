"""Compositions, the bijection with descent sets, and descent statistics on them."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .lacunar_sets import shift, subsets
from .perm_core import DESCENT_TAGS, check_tag, descent_composition

Composition = tuple


def as_comp(parts: Iterable[int]) -> Composition:
    c = tuple(parts)
    for x in c:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise ValueError(f"composition parts must be positive integers, got {c}")
    return c


def des_of_comp(c: Sequence[int]) -> tuple:
    """Partial sums of ``c`` except the last one."""
    out, s = [], 0
    for x in c[:-1]:
        s += x
        out.append(s)
    return tuple(out)


def comp_of_set(n: int, a: Iterable[int]) -> Composition:
    a = tuple(sorted(set(a)))
    if n < 0 or any(x < 1 or x > n - 1 for x in a):
        raise ValueError(f"{set(a) or '{}'} is not a subset of [{n - 1}]")
    if n == 0:
        return ()
    cuts = (0,) + a + (n,)
    return tuple(y - x for x, y in zip(cuts, cuts[1:]))


def comp_of_perm(p: Sequence[int]) -> Composition:
    return descent_composition(p)


def comp_mask(c: Sequence[int]) -> int:
    return sum(1 << (d - 1) for d in des_of_comp(c))


@lru_cache(maxsize=None)
def comp_key(c: tuple):
    """Sort key: size first, then binary-counter order of the descent set."""
    return (sum(c), comp_mask(c))


@lru_cache(maxsize=None)
def compositions(n: int) -> tuple:
    """All compositions of ``n`` in binary-counter order of their descent sets."""
    if n == 0:
        return ((),)
    return tuple(comp_of_set(n, s) for s in subsets(n - 1))


def compositions_upto(n: int):
    for k in range(n + 1):
        yield from compositions(k)


def representative_perm(c: Sequence[int], offset: int = 0) -> tuple:
    """A permutation of offset+1..offset+|c| with descent composition ``c``.

    Blocks are increasing and each block lies above the next one.
    """
    n = sum(c)
    out, top = [], n
    for part in c:
        out.extend(range(top - part + 1, top + 1))
        top -= part
    return tuple(x + offset for x in out)


def _stat_from_des(tag: str, n: int, des: tuple):
    d = set(des)
    if tag == "Des":
        return des
    if tag == "Comp":
        return comp_of_set(n, des)
    if tag == "des":
        return len(des)
    if tag == "maj":
        return sum(des)
    if tag == "comaj":
        return sum(n - k for k in des)
    if tag == "DesMaj":
        return (len(des), sum(des))
    if tag == "Epk":
        if n == 0:
            return ()
        return tuple(sorted((d | {n}) - {k + 1 for k in d}))
    if tag == "Pk":
        return tuple(i for i in des if i >= 2 and i - 1 not in d)
    if tag == "Lpk":
        return tuple(i for i in des if i - 1 not in d)
    if tag == "Rpk":
        tops = sorted(d | {n}) if n >= 1 else []
        return tuple(i for i in tops if i >= 2 and i - 1 not in d)
    raise ValueError(f"{tag} is not a descent statistic")


def stat_on_comp(tag: str, c: Sequence[int]):
    """Value of a descent statistic on any permutation with composition ``c``."""
    check_tag(tag)
    if tag not in DESCENT_TAGS:
        raise ValueError(f"{tag} is not a descent statistic")
    return _stat_from_des(tag, sum(c), des_of_comp(c))


def st_equivalent(tag: str, j: Sequence[int], k: Sequence[int]) -> bool:
    return sum(j) == sum(k) and stat_on_comp(tag, j) == stat_on_comp(tag, k)


def refines(beta: Sequence[int], alpha: Sequence[int]) -> bool:
    """True if ``beta`` refines ``alpha``."""
    return sum(beta) == sum(alpha) and set(des_of_comp(alpha)) <= set(des_of_comp(beta))


def refinements(alpha: Sequence[int]):
    """All compositions refining ``alpha``, in binary-counter order."""
    n = sum(alpha)
    base = set(des_of_comp(alpha))
    return [c for c in compositions(n) if base <= set(des_of_comp(c))]


def coarsenings(alpha: Sequence[int]):
    n = sum(alpha)
    base = set(des_of_comp(alpha))
    return [c for c in compositions(n) if set(des_of_comp(c)) <= base]


def concat(a: Sequence[int], b: Sequence[int]) -> Composition:
    return tuple(a) + tuple(b)


def near_concat(a: Sequence[int], b: Sequence[int]) -> Composition:
    """Merge the last part of ``a`` with the first part of ``b``."""
    a, b = tuple(a), tuple(b)
    if not a:
        return b
    if not b:
        return a
    return a[:-1] + (a[-1] + b[0],) + b[1:]


def _split_targets(j: Sequence[int], first: int):
    j = tuple(j)
    for l in range(1, len(j)):
        if j[l] > 2:
            yield j[:l] + (first, j[l] - first) + j[l + 1:]


def arrow(j: Sequence[int], k: Sequence[int]) -> bool:
    """K comes from J by splitting a non-first part > 2 into (1, part - 1)."""
    return tuple(k) in set(_split_targets(j, 1))


def arrowM(j: Sequence[int], k: Sequence[int]) -> bool:
    """K comes from J by splitting a non-first part > 2 into (2, part - 2)."""
    return tuple(k) in set(_split_targets(j, 2))


def arrow_relations(n: int, kind: str = "F") -> list:
    """All one-step relations (J, K) between compositions of ``n``."""
    first = {"F": 1, "M": 2}[kind]
    out = []
    for j in compositions(n):
        for k in _split_targets(j, first):
            out.append((j, k))
    return sorted(out, key=lambda jk: (comp_key(jk[0]), comp_key(jk[1])))


CONCAT_TAGS = ("Epk", "des", "maj", "Lpk", "Rpk", "Pk")


def _check_concat_args(tag, a, b):
    if tag not in CONCAT_TAGS:
        raise ValueError(f"no concatenation formula for {tag}")
    if not a or not b:
        raise ValueError("concatenation formulas need nonempty compositions")


def stat_of_concat(tag: str, a: Sequence[int], b: Sequence[int]):
    """Statistic of [a, b] from the statistics of a and b."""
    _check_concat_args(tag, a, b)
    n = sum(a)
    sa, sb = stat_on_comp(tag, a), stat_on_comp(tag, b)
    if tag == "des":
        return sa + sb + 1
    if tag == "maj":
        return sa + sb + n * (stat_on_comp("des", b) + 1)
    sa, sb_n = set(sa), set(shift(sb, n))
    if tag == "Epk":
        return tuple(sorted(sa | (sb_n - {n + 1})))
    if tag == "Rpk":
        return tuple(sorted(sa | sb_n))
    des_a = set(des_of_comp(a))
    if tag == "Lpk":
        extra = {n} if n - 1 not in des_a else set()
        return tuple(sorted(sa | (sb_n - {n + 1}) | extra))
    extra = {n} if (n - 1 not in des_a and n > 1) else set()
    return tuple(sorted(sa | sb_n | extra))  # Pk


def stat_of_near_concat(tag: str, a: Sequence[int], b: Sequence[int]):
    """Statistic of a (.) b from the statistics of a and b."""
    _check_concat_args(tag, a, b)
    n, m = sum(a), sum(b)
    sa, sb = stat_on_comp(tag, a), stat_on_comp(tag, b)
    if tag == "des":
        return sa + sb
    if tag == "maj":
        return sa + sb + n * stat_on_comp("des", b)
    sa, sb_n = set(sa), set(shift(sb, n))
    if tag == "Epk":
        return tuple(sorted((sa - {n}) | sb_n))
    if tag == "Lpk":
        return tuple(sorted(sa | sb_n))
    des_b = set(des_of_comp(b))
    if tag == "Rpk":
        extra = {n + 1} if (1 in des_b or m == 1) else set()
        return tuple(sorted((sa - {n}) | sb_n | extra))
    extra = {n + 1} if 1 in des_b else set()
    return tuple(sorted(sa | sb_n | extra))  # Pk


def format_comp(c: Sequence[int]) -> str:
    return "(" + ",".join(map(str, c)) + ")"
