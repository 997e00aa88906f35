"""Kernels of descent statistics as exact rational spans inside QSym, and the
ideal tests for the product and the four half/runic products."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .compositions import (
    arrow_relations,
    comp_of_set,
    compositions,
    concat,
    near_concat,
    stat_on_comp,
)
from .lacunar_sets import subsets
from .perm_core import DESCENT_TAGS, check_tag
from .qsym_algebra import OPS, F, M, QSymElement, expand, m_to_f

OPS_ORDER = ("product", "prec", "succeq", "bel", "tvi")
SIDES = ("left", "right")


# --- exact echelon spans ------------------------------------------------------


class SpanBasis:
    """Row space of exact rational vectors over a fixed list of columns.

    Rows are kept in reduced row echelon form, keyed by pivot column; the
    pivot of a new row is its smallest-index nonzero entry.
    """

    def __init__(self, ambient: Iterable, degree: Optional[int] = None):
        self.ambient = tuple(ambient)
        self.index = {c: i for i, c in enumerate(self.ambient)}
        self.degree = degree
        self.rows: dict = {}  # pivot -> {col: Fraction}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict) -> dict:
        v = {k: Fraction(x) for k, x in vec.items() if x != 0}
        for piv in sorted(self.rows):
            c = v.get(piv)
            if c:
                for k, x in self.rows[piv].items():
                    nv = v.get(k, 0) - c * x
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        v = self._reduce(vec)
        if not v:
            return False
        piv = min(v)
        lead = v[piv]
        v = {k: x / lead for k, x in v.items()}
        for p, row in self.rows.items():
            c = row.get(piv)
            if c:
                for k, x in v.items():
                    nv = row.get(k, 0) - c * x
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[piv] = v
        return True

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)

    def vector(self, e: QSymElement) -> dict:
        """Coordinates of a homogeneous element over the ambient columns."""
        out = {}
        for c, v in e.items():
            if c not in self.index:
                raise ValueError(f"{c} is not an ambient column")
            out[self.index[c]] = v
        return out

    def contains_element(self, e: QSymElement) -> bool:
        return self.contains(self.vector(e))

    def echelon(self) -> list:
        """Rows as dense Fraction lists, sorted by pivot."""
        n = len(self.ambient)
        return [[row.get(k, Fraction(0)) for k in range(n)] for _, row in sorted(self.rows.items())]

    def null_space(self) -> list:
        """Basis of {w : r.w = 0 for every row r}, as dense lists."""
        n = len(self.ambient)
        pivots = sorted(self.rows)
        free = [k for k in range(n) if k not in self.rows]
        out = []
        for f in free:
            w = [Fraction(0)] * n
            w[f] = Fraction(1)
            for p in pivots:
                w[p] = -self.rows[p].get(f, Fraction(0))
            out.append(w)
        return out

    def same_span(self, other: "SpanBasis") -> bool:
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        return all(self.contains(row) for row in other.rows.values())

    @classmethod
    def spanned_by(cls, ambient, vectors, degree=None):
        s = cls(ambient, degree)
        for v in vectors:
            s.add(v)
        return s


def rank(vectors: list, ncols: int) -> int:
    s = SpanBasis(range(ncols))
    for v in vectors:
        s.add({i: x for i, x in enumerate(v) if x})
    return s.dim


# --- kernels ------------------------------------------------------------------


def _check_descent(tag):
    check_tag(tag)
    if tag not in DESCENT_TAGS:
        raise ValueError(f"{tag} is not a descent statistic")


def equivalence_classes(tag: str, n: int) -> list:
    """st-equivalence classes of compositions of n, each sorted
    lexicographically, listed in order of their first member."""
    _check_descent(tag)
    groups: dict = {}
    for c in compositions(n):
        groups.setdefault(stat_on_comp(tag, c), []).append(c)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def kernel_generators(tag: str, n: int, max_degree: Optional[int] = None) -> list:
    """Basis F_J - F_K of the kernel in degree n, where J is the
    lexicographically smallest member of its class."""
    N = n if max_degree is None else max_degree
    gens = []
    for cls in equivalence_classes(tag, n):
        j = cls[0]
        for k in cls[1:]:
            gens.append(F(j, N) - F(k, N))
    return gens


def kernel_component(tag: str, n: int) -> SpanBasis:
    _check_descent(tag)
    span = SpanBasis(compositions(n), n)
    for g in kernel_generators(tag, n):
        span.add(span.vector(g))
    return span


def shuffle_algebra_dimension(tag: str, n: int) -> int:
    return len(compositions(n)) - kernel_component(tag, n).dim


def epk_f_generators(n: int) -> SpanBasis:
    span = SpanBasis(compositions(n), n)
    for j, k in arrow_relations(n, "F"):
        span.add(span.vector(F(j, n) - F(k, n)))
    return span


def epk_m_generators(n: int) -> SpanBasis:
    span = SpanBasis(compositions(n), n)
    for j, k in arrow_relations(n, "M"):
        span.add(span.vector(m_to_f(M(j, n) + M(k, n))))
    return span


# --- ideal tests --------------------------------------------------------------


@dataclass
class IdealWitness:
    op: str
    side: str
    generator: QSymElement
    multiplier: QSymElement
    result: QSymElement

    def describe(self) -> str:
        g, f = self.generator.to_text(), self.multiplier.to_text()
        expr = f"({f}) {self.op} ({g})" if self.side == "left" else f"({g}) {self.op} ({f})"
        return f"{expr} = {self.result.to_text()}"

    def as_dict(self) -> dict:
        return {
            "op": self.op,
            "side": self.side,
            "m": self.generator.to_text(),
            "a": self.multiplier.to_text(),
            "result": self.result.to_text(),
        }


@dataclass
class IdealVerdict:
    tag: str
    op: str
    side: str
    max_degree: int
    holds: bool
    witness: Optional[IdealWitness] = None


def is_op_ideal(tag: str, op: str, side: str, N: int) -> IdealVerdict:
    """Check f*g (left), g*f (right) or both against the kernel, for kernel
    basis elements g and F-basis elements f with deg f + deg g <= N."""
    _check_descent(tag)
    if op not in OPS:
        raise ValueError(f"unknown operation {op!r}")
    if side not in ("left", "right", "both"):
        raise ValueError(f"unknown side {side!r}")
    if N < 2:
        raise ValueError("N must be at least 2")
    fn = OPS[op]
    sides = ("left", "right") if side == "both" else (side,)
    kernels = {t: kernel_component(tag, t) for t in range(N + 1)}
    gens = {d: kernel_generators(tag, d, N) for d in range(1, N + 1)}
    for total in range(1, N + 1):
        target = kernels[total]
        for s in sides:
            for d in range(1, total + 1):
                for g in gens[d]:
                    for c in compositions(total - d):
                        f = F(c, N)
                        r = fn(f, g) if s == "left" else fn(g, f)
                        if not target.contains_element(r.to("F")):
                            return IdealVerdict(tag, op, side, N, False, IdealWitness(op, s, g, f, r.to("F")))
    return IdealVerdict(tag, op, side, N, True)


def bel_tvi_criterion(tag: str, op: str, side: str, N: int) -> bool:
    """Composition-level test: G(.)J ~ G(.)K etc. for equivalent J, K."""
    _check_descent(tag)
    join = near_concat if op == "bel" else concat
    for n in range(1, N):
        for cls in equivalence_classes(tag, n):
            for j, k in combinations(cls, 2):
                for gsize in range(1, N - n + 1):
                    for g in compositions(gsize):
                        if side == "left":
                            a, b = join(g, j), join(g, k)
                        else:
                            a, b = join(j, g), join(k, g)
                        if stat_on_comp(tag, a) != stat_on_comp(tag, b):
                            return False
    return True


@dataclass
class IdealMatrix:
    max_degree: int
    tags: tuple
    cells: dict = field(default_factory=dict)  # (tag, op, side) -> IdealVerdict
    criterion_agrees: dict = field(default_factory=dict)  # (tag, op, side) -> bool

    def verdict(self, tag, op, side) -> bool:
        if side == "both":
            return self.cells[(tag, op, "left")].holds and self.cells[(tag, op, "right")].holds
        return self.cells[(tag, op, side)].holds

    def columns(self):
        return [(op, s) for op in OPS_ORDER for s in SIDES]

    def witness_ids(self) -> dict:
        ids, k = {}, 0
        for tag in self.tags:
            for op, s in self.columns():
                if not self.cells[(tag, op, s)].holds:
                    k += 1
                    ids[(tag, op, s)] = f"w{k}"
        return ids

    def to_tsv(self) -> str:
        ids = self.witness_ids()
        lines = ["statistic\t" + "\t".join(f"{op}:{s}" for op, s in self.columns())]
        for tag in self.tags:
            vals = []
            for op, s in self.columns():
                key = (tag, op, s)
                vals.append("true" if self.cells[key].holds else f"false({ids[key]})")
            lines.append(tag + "\t" + "\t".join(vals))
        for key, wid in ids.items():
            lines.append(f"# {wid}\t{key[0]}\t{self.cells[key].witness.describe()}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        ids = self.witness_ids()
        rows = []
        for tag in self.tags:
            cells = {}
            for op, s in self.columns():
                key = (tag, op, s)
                cells[f"{op}:{s}"] = True if self.cells[key].holds else f"false({ids[key]})"
            rows.append({"statistic": tag, "cells": cells})
        witnesses = {
            wid: dict(statistic=key[0], **self.cells[key].witness.as_dict()) for key, wid in ids.items()
        }
        agree = all(self.criterion_agrees.values())
        return {
            "max_degree": self.max_degree,
            "columns": [f"{op}:{s}" for op, s in self.columns()],
            "rows": rows,
            "witnesses": witnesses,
            "composition_criterion_agrees": agree,
        }


def ideal_matrix(N: int, tags: Iterable[str] = DESCENT_TAGS) -> IdealMatrix:
    if N < 4:
        raise ValueError("N must be at least 4")
    tags = tuple(tags)
    mat = IdealMatrix(N, tags)
    for tag in tags:
        for op in OPS_ORDER:
            for s in SIDES:
                v = is_op_ideal(tag, op, s, N)
                mat.cells[(tag, op, s)] = v
                if op in ("bel", "tvi"):
                    mat.criterion_agrees[(tag, op, s)] = bel_tvi_criterion(tag, op, s, N) == v.holds
    return mat


# --- M-through-F identities ---------------------------------------------------


def _f_sum(n, terms, N) -> QSymElement:
    d: dict = {}
    for b, sign in terms:
        c = comp_of_set(n, b)
        d[c] = d.get(c, 0) + sign
    return QSymElement("F", d, N)


def m_through_f_checks(n: int, oracle: bool = False) -> bool:
    """The three subset-sum expressions of M in terms of F, for every
    admissible C and k.  With ``oracle`` both sides are also expanded."""
    if n < 1:
        raise ValueError("n must be positive")
    full = set(range(1, n))
    subs = [set(s) for s in subsets(n - 1)]

    def agree(lhs_m, rhs_f):
        if m_to_f(lhs_m) != rhs_f:
            return False
        if oracle:
            return expand(lhs_m, n) == expand(rhs_f, n)
        return True

    for C in subs:
        lhs = M(comp_of_set(n, C), n)
        rhs = _f_sum(n, [(B, (-1) ** len(B - C)) for B in subs if B >= C], n)
        if not agree(lhs, rhs):
            return False
        for k in sorted(full - C):
            lhs2 = lhs + M(comp_of_set(n, C | {k}), n)
            rhs2 = _f_sum(n, [(B, (-1) ** len(B - C)) for B in subs if B >= C and k not in B], n)
            if not agree(lhs2, rhs2):
                return False
            if k - 1 in C or k - 1 == 0:
                continue
            terms = []
            for B in subs:
                if B >= C and k not in B and k - 1 not in B:
                    sign = (-1) ** len(B - C)
                    terms += [(B, sign), (B | {k - 1}, -sign)]
            if not agree(lhs2, _f_sum(n, terms, n)):
                return False
    return True


# --- M-binomial search --------------------------------------------------------


@dataclass
class BinomialReport:
    tag: str
    n: int
    verdict: bool
    kernel_dim: int
    certificate_rank: int
    certificate: list  # [(J, lambda, K, mu)] with lambda*M_J + mu*M_K in the kernel

    def note(self) -> str:
        if self.verdict:
            return "two-term M combinations span the kernel"
        return "no pairwise certificate found"


def kernel_in_m(tag: str, n: int) -> SpanBasis:
    span = SpanBasis(compositions(n), n)
    for g in kernel_generators(tag, n):
        span.add(span.vector(g.to("M")))
    return span


def is_m_binomial(tag: str, n: int) -> BinomialReport:
    """Search for a spanning set of the kernel made of two-term M combinations,
    by intersecting the kernel with span{M_J, M_K} for every pair J, K."""
    _check_descent(tag)
    K = kernel_in_m(tag, n)
    comps = K.ambient
    null = K.null_space()  # K is exactly the annihilator of these vectors
    col = [[w[i] for w in null] for i in range(len(comps))]
    cert = []
    cert_span = SpanBasis(comps, n)

    def record(i, lam, j, mu):
        vec = {i: lam} if j is None else {i: lam, j: mu}
        if not K.contains(vec):
            raise AssertionError("certificate vector escaped the kernel")
        cert_span.add(vec)
        cert.append((comps[i], lam, comps[j] if j is not None else None, mu))

    for i in range(len(comps)):
        if not any(col[i]):
            record(i, Fraction(1), None, Fraction(0))
    for i, j in combinations(range(len(comps)), 2):
        ci, cj = col[i], col[j]
        if not any(ci) or not any(cj):
            continue  # covered by single-column members
        # solve lam*ci + mu*cj = 0 with (lam, mu) != 0
        k = next(t for t in range(len(ci)) if ci[t] or cj[t])
        lam, mu = cj[k], -ci[k]
        if all(lam * x + mu * y == 0 for x, y in zip(ci, cj)):
            record(i, lam, j, mu)
    return BinomialReport(tag, n, cert_span.dim == K.dim, K.dim, cert_span.dim, cert)


# --- implications between certifier and ideal verdicts -------------------------


def implication_checks(cert: dict, ideals: Optional[IdealMatrix] = None) -> list:
    """Evaluate the known implications on computed verdicts.

    ``cert`` maps (notion, tag) to a boolean.  Returns rows
    (name, tag, holds); a row is only produced when its premise applies.
    """
    tags = sorted({t for _, t in cert})
    rows = []

    def c(notion, tag):
        return cert[(notion, tag)]

    for tag in tags:
        sh, lr, le, ri = c("shuffle", tag), c("LR", tag), c("left", tag), c("right", tag)
        hg = c("head-graft", tag)
        rows.append(("shuffle and head-graft imply LR", tag, not (sh and hg) or lr))
        if sh:
            rows.append(("given shuffle: LR, left, right, head-graft agree", tag, lr == le == ri == hg))
        rows.append(("LR implies shuffle, left, right, head-graft", tag, not lr or (sh and le and ri and hg)))
        rows.append(("left and right imply LR", tag, not (le and ri) or lr))
        if ideals is not None and tag in ideals.tags:
            wl, wr = c("weak-left", tag), c("weak-right", tag)
            prec = ideals.verdict(tag, "prec", "both")
            succ = ideals.verdict(tag, "succeq", "both")
            prod = ideals.verdict(tag, "product", "both")
            rows.append(("left, weak-left, prec-ideal agree", tag, le == wl == prec))
            rows.append(("right, weak-right, succeq-ideal agree", tag, ri == wr == succ))
            rows.append(("shuffle agrees with product-ideal", tag, sh == prod))
    return rows
