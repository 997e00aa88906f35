"""Shuffles of permutations, statistic multisets over them, and brute-force
certifiers for the shuffle-compatibility notions."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Optional, Sequence

from .perm_core import check_tag, format_value, head_graft, standardize, statistic, tail

NOTIONS = ("shuffle", "left", "right", "weak-left", "weak-right", "LR", "head-graft")


class DisjointnessError(ValueError):
    pass


def _check_disjoint(p, s):
    common = set(p) & set(s)
    if common:
        raise DisjointnessError(f"permutations share letters {sorted(common)}")


def _interleave(p: tuple, s: tuple):
    if not p:
        yield s
        return
    if not s:
        yield p
        return
    for rest in _interleave(p[1:], s):
        yield (p[0],) + rest
    for rest in _interleave(p, s[1:]):
        yield (s[0],) + rest


def shuffles(p: Sequence[int], s: Sequence[int]) -> list:
    """All interleavings of two disjoint permutations."""
    p, s = tuple(p), tuple(s)
    _check_disjoint(p, s)
    return list(_interleave(p, s))


def left_shuffles(p: Sequence[int], s: Sequence[int]) -> list:
    """Shuffles that start with the first letter of ``p``."""
    p, s = tuple(p), tuple(s)
    _check_disjoint(p, s)
    if not p:
        return []
    return [(p[0],) + t for t in _interleave(p[1:], s)]


def right_shuffles(p: Sequence[int], s: Sequence[int]) -> list:
    """Shuffles that start with the first letter of ``s``."""
    p, s = tuple(p), tuple(s)
    _check_disjoint(p, s)
    if not s:
        return []
    return [(s[0],) + t for t in _interleave(p, s[1:])]


def lr_recursion_check(p: Sequence[int], s: Sequence[int]) -> bool:
    """Check the three recursive descriptions of left and right shuffles."""
    p, s = tuple(p), tuple(s)
    _check_disjoint(p, s)
    ok = set(left_shuffles(p, s)) == set(right_shuffles(s, p))
    if p:
        ok &= set(left_shuffles(p, s)) == set(right_shuffles(tail(p), head_graft(p[0], s)))
    if s:
        ok &= set(right_shuffles(p, s)) == set(left_shuffles(head_graft(s[0], p), tail(s)))
    return ok


class StatMultiset(Counter):
    """Multiset of statistic values.  Subtraction requires containment."""

    def __sub__(self, other):
        out = StatMultiset(self)
        for k, v in other.items():
            if out.get(k, 0) < v:
                raise ValueError(f"multiset difference: {k!r} occurs too often in the subtrahend")
            out[k] -= v
            if out[k] == 0:
                del out[k]
        return out

    def frozen(self) -> tuple:
        return tuple(sorted(self.items()))


def stat_multiset(tag: str, perms) -> StatMultiset:
    check_tag(tag)
    return StatMultiset(statistic(tag, t) for t in perms)


# --- certification -----------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """One input to a compatibility notion: a pair (pi, sigma), or (a, pi)
    for head-grafting."""

    kind: str  # "pair" or "graft"
    first: tuple
    second: tuple

    def describe(self) -> str:
        if self.kind == "graft":
            return f"a={self.first[0]}, pi={self.second}"
        return f"pi={self.first}, sigma={self.second}"

    def as_dict(self) -> dict:
        if self.kind == "graft":
            return {"a": self.first[0], "pi": list(self.second)}
        return {"pi": list(self.first), "sigma": list(self.second)}

    def pattern(self) -> tuple:
        """Order pattern of the instance, independent of the letters used."""
        word = self.first + self.second
        return (self.kind, len(self.first), standardize(word))


@dataclass
class ViolationClass:
    key: tuple
    groups: list  # [(value, [Instance, ...]), ...] in order of first appearance


@dataclass
class CompatReport:
    notion: str
    statistic: str
    size_bound: int
    verdict: bool
    witness: Optional[tuple] = None  # (Instance, value, Instance, value)
    violations: list = field(default_factory=list)
    checked: int = 0

    def witness_instances(self):
        for vc in self.violations:
            for _, members in vc.groups:
                yield from members

    def has_violating_pair(self, x: Instance, y: Instance) -> bool:
        """True if x and y (up to order-isomorphism) sit in one violated class
        with different values."""
        px, py = x.pattern(), y.pattern()
        for vc in self.violations:
            gx = gy = None
            for gi, (_, members) in enumerate(vc.groups):
                pats = {m.pattern() for m in members}
                if px in pats:
                    gx = gi
                if py in pats:
                    gy = gi
            if gx is not None and gy is not None and gx != gy:
                return True
        return False

    def classes_as_dicts(self, limit: Optional[int] = None) -> list:
        out = []
        for vc in self.violations[:limit]:
            out.append({
                "key": _plain(vc.key),
                "groups": [
                    {"value": render_value(self.notion, self.statistic, v), "members": [m.as_dict() for m in ms]}
                    for v, ms in vc.groups
                ],
            })
        return out

    def scope(self) -> str:
        return f"checked all canonical instances with total size <= {self.size_bound}"

    def to_dict(self) -> dict:
        out = {
            "notion": self.notion,
            "statistic": self.statistic,
            "size_bound": self.size_bound,
            "verdict": self.verdict,
            "instances_checked": self.checked,
            "scope": self.scope(),
            "witness": None,
        }
        if self.witness:
            x, vx, y, vy = self.witness
            out["witness"] = {
                "first": x.as_dict(),
                "first_value": render_value(self.notion, self.statistic, vx),
                "second": y.as_dict(),
                "second_value": render_value(self.notion, self.statistic, vy),
            }
        out["violated_classes"] = len(self.violations)
        return out


def render_value(notion, tag, value):
    if notion == "head-graft":
        return format_value(tag, value)
    if notion == "LR":
        return [_render_ms(tag, value[0]), _render_ms(tag, value[1])]
    return _render_ms(tag, value)


def _plain(x):
    if isinstance(x, (tuple, list)):
        return [_plain(y) for y in x]
    return x


def _render_ms(tag, frozen):
    return [[format_value(tag, v), c] for v, c in frozen]


def canonical_pairs(m: int, n: int):
    """Disjoint pairs (pi, sigma) with |pi| = m, |sigma| = n using exactly the
    letters 1..m+n, in lexicographic order of (pi, sigma)."""
    letters = range(1, m + n + 1)
    out = []
    for chosen in combinations(letters, m):
        rest = [x for x in letters if x not in chosen]
        for p in permutations(chosen):
            for s in permutations(rest):
                out.append((p, s))
    out.sort()
    return out


def _evaluate(notion: str, tag: str, total: int) -> list:
    """Keyed values for every canonical instance of the given total size."""
    rows = []
    if notion == "head-graft":
        n = total - 1
        if n < 1:
            return rows
        for a in range(1, n + 2):
            rest = [x for x in range(1, n + 2) if x != a]
            for p in permutations(rest):
                key = (statistic(tag, p), n, a > p[0])
                rows.append((key, statistic(tag, (a,) + p), Instance("graft", (a,), p)))
        return rows
    for m in range(0, total + 1):
        n = total - m
        nonempty = notion != "shuffle"
        if nonempty and (m == 0 or n == 0):
            continue
        for p, s in canonical_pairs(m, n):
            if notion in ("left", "right") and not p[0] > s[0]:
                continue
            if notion.startswith("weak") and not min(p) > max(s):
                continue
            key = (statistic(tag, p), statistic(tag, s), m, n)
            if notion == "shuffle":
                val = stat_multiset(tag, shuffles(p, s)).frozen()
            elif notion in ("left", "weak-left"):
                val = stat_multiset(tag, left_shuffles(p, s)).frozen()
            elif notion in ("right", "weak-right"):
                val = stat_multiset(tag, right_shuffles(p, s)).frozen()
            else:
                key = key + (p[0] > s[0],)
                val = (
                    stat_multiset(tag, left_shuffles(p, s)).frozen(),
                    stat_multiset(tag, right_shuffles(p, s)).frozen(),
                )
            rows.append((key, val, Instance("pair", p, s)))
    return rows


def _evaluate_star(args):
    return _evaluate(*args)


def certify(notion: str, tag: str, size_bound: int, jobs: int = 1) -> CompatReport:
    """Brute-force check of a compatibility notion over all canonical
    instances of total size at most ``size_bound``."""
    if notion not in NOTIONS:
        raise ValueError(f"unknown notion {notion!r}; expected one of {', '.join(NOTIONS)}")
    check_tag(tag)
    if size_bound < 1:
        raise ValueError("size_bound must be at least 1")
    tasks = [(notion, tag, total) for total in range(1, size_bound + 1)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_evaluate_star, tasks))
    else:
        chunks = [_evaluate(*t) for t in tasks]

    classes: dict = {}
    order = []
    witness = None
    checked = 0
    for rows in chunks:  # sizes ascending, instances in lexicographic order
        for key, val, inst in rows:
            checked += 1
            groups = classes.get(key)
            if groups is None:
                classes[key] = groups = {}
                order.append(key)
            if groups and val not in groups and witness is None:
                first_val, first_members = next(iter(groups.items()))
                witness = (first_members[0], first_val, inst, val)
            groups.setdefault(val, []).append(inst)
    violations = [
        ViolationClass(k, list(classes[k].items())) for k in order if len(classes[k]) > 1
    ]
    return CompatReport(
        notion=notion,
        statistic=tag,
        size_bound=size_bound,
        verdict=not violations,
        witness=witness,
        violations=violations,
        checked=checked,
    )


def recheck_witness(report: CompatReport) -> bool:
    """Independently confirm a reported witness by recomputing both sides."""
    if report.witness is None:
        return report.verdict
    x, _, y, _ = report.witness
    tag, notion = report.statistic, report.notion

    def key_and_value(inst):
        if inst.kind == "graft":
            a, p = inst.first[0], inst.second
            return (statistic(tag, p), len(p), a > p[0]), statistic(tag, head_graft(a, p))
        p, s = inst.first, inst.second
        key = (statistic(tag, p), statistic(tag, s), len(p), len(s))
        sh = shuffles(p, s)
        lefts = [t for t in sh if p and t[0] == p[0]]
        rights = [t for t in sh if s and t[0] == s[0]]
        if notion == "shuffle":
            return key, stat_multiset(tag, sh)
        if notion in ("left", "weak-left"):
            return key, stat_multiset(tag, lefts)
        if notion in ("right", "weak-right"):
            return key, stat_multiset(tag, rights)
        return key + (p[0] > s[0],), (stat_multiset(tag, lefts), stat_multiset(tag, rights))

    kx, vx = key_and_value(x)
    ky, vy = key_and_value(y)
    return kx == ky and vx != vy
