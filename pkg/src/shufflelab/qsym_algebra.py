"""Truncated quasisymmetric functions in the monomial (M) and fundamental (F)
bases, with a truncated-polynomial oracle.

Products of F-basis elements are computed from shuffles of representative
permutations, and the half-products ``prec`` / ``succeq`` from left and right
shuffles.  The runic products ``bel`` / ``tvi`` use the basis rules.  The
oracle (``oracle_op``) recomputes any of them independently: expand both
factors into actual polynomials, keep each pair of monomials according to the
comparison of their supports, and read the result back in the F basis.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from itertools import product as iproduct
from math import inf
from numbers import Rational
from typing import Callable, Iterable

from .compositions import (
    comp_key,
    comp_of_perm,
    compositions,
    compositions_upto,
    concat,
    coarsenings,
    near_concat,
    refinements,
    representative_perm,
)
from .shuffle_engine import left_shuffles, right_shuffles, shuffles

BASES = ("F", "M")


def exact(x):
    """Normalize an exact rational: integral values become ints."""
    if isinstance(x, bool) or not isinstance(x, Rational):
        raise TypeError(f"coefficients must be exact rationals, got {x!r}")
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _clean(d: dict, max_degree: int):
    out, dropped = {}, False
    for c, v in d.items():
        if v == 0:
            continue
        if sum(c) > max_degree:
            dropped = True
            continue
        out[c] = exact(v)
    return out, dropped


class QSymElement:
    """Immutable exact-rational combination of compositions in one basis."""

    __slots__ = ("basis", "_terms", "max_degree", "truncated")

    def __init__(self, basis: str, terms: dict, max_degree: int, truncated: bool = False):
        if basis not in BASES:
            raise ValueError(f"basis must be F or M, got {basis!r}")
        cleaned, dropped = _clean(terms, max_degree)
        self.basis = basis
        self._terms = tuple(sorted(cleaned.items(), key=lambda kv: comp_key(kv[0])))
        self.max_degree = max_degree
        self.truncated = truncated or dropped

    # construction
    @classmethod
    def basis_element(cls, basis: str, comp, max_degree: int):
        return cls(basis, {tuple(comp): 1}, max_degree)

    @classmethod
    def zero(cls, basis: str, max_degree: int):
        return cls(basis, {}, max_degree)

    @classmethod
    def one(cls, basis: str, max_degree: int):
        return cls(basis, {(): 1}, max_degree)

    # access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def coeff(self, comp) -> Rational:
        return self.terms.get(tuple(comp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(c) for c, _ in self._terms), default=0)

    def counit(self):
        return self.coeff(())

    def homogeneous(self, n: int):
        return QSymElement(self.basis, {c: v for c, v in self._terms if sum(c) == n}, self.max_degree)

    def to(self, basis: str) -> "QSymElement":
        if basis == self.basis:
            return self
        return m_to_f(self) if basis == "F" else f_to_m(self)

    def _lift(self, other):
        if isinstance(other, QSymElement):
            return other.to(self.basis)
        return QSymElement(self.basis, {(): exact(other)}, self.max_degree)

    # linear structure
    def __add__(self, other):
        other = self._lift(other)
        d = self.terms
        for c, v in other.items():
            d[c] = d.get(c, 0) + v
        return QSymElement(
            self.basis, d, min(self.max_degree, other.max_degree), self.truncated or other.truncated
        )

    __radd__ = __add__

    def __neg__(self):
        return QSymElement(self.basis, {c: -v for c, v in self._terms}, self.max_degree, self.truncated)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        k = exact(k)
        return QSymElement(self.basis, {c: k * v for c, v in self._terms}, self.max_degree, self.truncated)

    def __mul__(self, other):
        if isinstance(other, QSymElement):
            return product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, QSymElement):
            return self._terms == other.to(self.basis)._terms
        if isinstance(other, Rational):
            return self._terms == self._lift(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(self.to("F")._terms)

    def __repr__(self):
        return f"QSymElement({self.to_text()!r}, max_degree={self.max_degree})"

    # canonical text form
    def to_text(self) -> str:
        if not self._terms:
            return f"{self.basis} 0"
        parts = [f"{v}*[{','.join(map(str, c))}]" for c, v in self._terms]
        return self.basis + " " + " ".join(parts)

    @classmethod
    def from_text(cls, text: str, max_degree: int | None = None):
        text = text.strip()
        basis, _, rest = text.partition(" ")
        rest = rest.strip()
        terms = {}
        if rest != "0":
            for tok in rest.split():
                m = re.fullmatch(r"(-?\d+(?:/\d+)?)\*\[([\d,]*)\]", tok)
                if not m:
                    raise ValueError(f"bad term {tok!r}")
                comp = tuple(int(x) for x in m.group(2).split(",") if x)
                if comp in terms:
                    raise ValueError(f"repeated composition {comp}")
                terms[comp] = Fraction(m.group(1))
        if max_degree is None:
            max_degree = max((sum(c) for c in terms), default=0)
        return cls(basis, terms, max_degree)


def F(comp, max_degree: int) -> QSymElement:
    return QSymElement.basis_element("F", comp, max_degree)


def M(comp, max_degree: int) -> QSymElement:
    return QSymElement.basis_element("M", comp, max_degree)


# --- basis change -------------------------------------------------------------


@lru_cache(maxsize=None)
def _m_in_f(alpha: tuple) -> tuple:
    la = len(alpha)
    return tuple((b, (-1) ** (len(b) - la)) for b in refinements(alpha))


@lru_cache(maxsize=None)
def _f_in_m(alpha: tuple) -> tuple:
    return tuple((b, 1) for b in refinements(alpha))


def _change(e: QSymElement, table: Callable, basis: str) -> QSymElement:
    d: dict = {}
    for c, v in e.items():
        for b, s in table(c):
            d[b] = d.get(b, 0) + s * v
    return QSymElement(basis, d, e.max_degree, e.truncated)


def m_to_f(e: QSymElement) -> QSymElement:
    if e.basis == "F":
        return e
    return _change(e, _m_in_f, "F")


def f_to_m(e: QSymElement) -> QSymElement:
    if e.basis == "M":
        return e
    return _change(e, _f_in_m, "M")


# --- product via shuffles -----------------------------------------------------


@lru_cache(maxsize=None)
def f_product_terms(alpha: tuple, beta: tuple) -> tuple:
    """F_alpha * F_beta as ((composition, coefficient), ...)."""
    n = sum(alpha)
    p = representative_perm(alpha)
    s = representative_perm(beta, offset=n)
    d: dict = {}
    for t in shuffles(p, s):
        c = comp_of_perm(t)
        d[c] = d.get(c, 0) + 1
    return tuple(sorted(d.items(), key=lambda kv: comp_key(kv[0])))


def _bilinear(a: QSymElement, b: QSymElement, table, out_basis=None) -> QSymElement:
    fa, fb = a.to("F"), b.to("F")
    N = min(a.max_degree, b.max_degree)
    d: dict = {}
    dropped = a.truncated or b.truncated
    for ca, va in fa.items():
        for cb, vb in fb.items():
            if sum(ca) + sum(cb) > N:
                dropped = True
                continue
            for c, k in table(ca, cb):
                d[c] = d.get(c, 0) + k * va * vb
    return QSymElement("F", d, N, dropped).to(out_basis or a.basis)


def product(a: QSymElement, b: QSymElement) -> QSymElement:
    return _bilinear(a, b, f_product_terms)


# --- runic products by basis rules --------------------------------------------


def _f_bel(alpha, beta):
    return ((near_concat(alpha, beta), 1),)


def _f_tvi(alpha, beta):
    return ((concat(alpha, beta), 1),)


def _m_bel(alpha, beta):
    if alpha and beta:
        return ((concat(alpha, beta), 1), (near_concat(alpha, beta), 1))
    return ((concat(alpha, beta), 1),)


def _m_tvi(alpha, beta):
    return ((concat(alpha, beta), 1),)


def _rule_op(a, b, f_rule, m_rule):
    if a.basis == "M" and b.basis == "M":
        N = min(a.max_degree, b.max_degree)
        d: dict = {}
        dropped = a.truncated or b.truncated
        for ca, va in a.items():
            for cb, vb in b.items():
                if sum(ca) + sum(cb) > N:
                    dropped = True
                    continue
                for c, k in m_rule(ca, cb):
                    d[c] = d.get(c, 0) + k * va * vb
        return QSymElement("M", d, N, dropped)
    return _bilinear(a, b, f_rule)


def bel(a: QSymElement, b: QSymElement) -> QSymElement:
    return _rule_op(a, b, _f_bel, _m_bel)


def tvi(a: QSymElement, b: QSymElement) -> QSymElement:
    return _rule_op(a, b, _f_tvi, _m_tvi)


# --- the polynomial oracle ----------------------------------------------------


class TruncPoly:
    """Exact polynomial in x_1..x_m truncated at total degree N.

    Monomials are exponent tuples of length m.
    """

    __slots__ = ("m", "N", "terms")

    def __init__(self, m: int, N: int, terms: dict | None = None):
        self.m, self.N = m, N
        self.terms = {}
        for e, v in (terms or {}).items():
            if v != 0 and sum(e) <= N:
                if len(e) != m:
                    raise ValueError("exponent vector has the wrong length")
                self.terms[e] = v

    def __add__(self, other):
        d = dict(self.terms)
        for e, v in other.terms.items():
            d[e] = d.get(e, 0) + v
        return TruncPoly(self.m, min(self.N, other.N), d)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return TruncPoly(self.m, self.N, {e: k * v for e, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TruncPoly) and self.m == other.m and self.terms == other.terms

    def __repr__(self):
        return f"TruncPoly(m={self.m}, N={self.N}, {len(self.terms)} terms)"

    def combine(self, other: "TruncPoly", rule: Callable | None = None) -> "TruncPoly":
        """Sum of u*v over monomial pairs allowed by ``rule`` (all pairs if None)."""
        N = min(self.N, other.N)
        d: dict = {}
        for e1, v1 in self.terms.items():
            s1 = support(e1)
            for e2, v2 in other.terms.items():
                if sum(e1) + sum(e2) > N:
                    continue
                if rule is not None and not rule(s1, support(e2)):
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                d[e] = d.get(e, 0) + v1 * v2
        return TruncPoly(self.m, N, d)

    def __mul__(self, other):
        return self.combine(other)

    def combine_at(self, other: "TruncPoly", targets: Iterable[tuple], rule: Callable | None = None) -> dict:
        """Coefficients of ``combine(other, rule)`` at the given monomials only."""
        out = {}
        for t in targets:
            acc = 0
            for u in iproduct(*(range(k + 1) for k in t)):
                a = self.terms.get(u)
                if a is None:
                    continue
                v = tuple(x - y for x, y in zip(t, u))
                b = other.terms.get(v)
                if b is None:
                    continue
                if rule is None or rule(support(u), support(v)):
                    acc += a * b
            if acc:
                out[t] = acc
        return out


def support(e: tuple) -> tuple:
    return tuple(i + 1 for i, x in enumerate(e) if x)


def _smin(s):
    return s[0] if s else inf


def _smax(s):
    return s[-1] if s else -inf


RULES = {
    "prec": lambda s, t: _smin(s) < _smin(t),
    "succeq": lambda s, t: _smin(s) >= _smin(t),
    "bel": lambda s, t: _smax(s) <= _smin(t),
    "tvi": lambda s, t: _smax(s) < _smin(t),
    "product": None,
}


@lru_cache(maxsize=None)
def _expand_basis(basis: str, comp: tuple, m: int) -> tuple:
    n = sum(comp)
    terms: dict = {}
    if basis == "F":
        strict = set()
        s = 0
        for x in comp[:-1]:
            s += x
            strict.add(s)

        def rec(pos, lo, idx):
            if pos > n:
                e = [0] * m
                for i in idx:
                    e[i - 1] += 1
                e = tuple(e)
                terms[e] = terms.get(e, 0) + 1
                return
            start = lo + 1 if (pos - 1) in strict else lo
            for i in range(max(start, 1), m + 1):
                idx.append(i)
                rec(pos + 1, i, idx)
                idx.pop()

        rec(1, 1, [])
    else:
        for idx in combinations(range(1, m + 1), len(comp)):
            e = [0] * m
            for i, k in zip(idx, comp):
                e[i - 1] = k
            terms[tuple(e)] = 1
    return tuple(terms.items())


def expand(e: QSymElement, m: int, N: int | None = None) -> TruncPoly:
    """Restrict the defining sums of ``e`` to the variables x_1..x_m."""
    if m < 1:
        raise ValueError("need at least one variable")
    N = e.max_degree if N is None else N
    d: dict = {}
    for c, v in e.items():
        for mono, k in _expand_basis(e.basis, c, m):
            d[mono] = d.get(mono, 0) + k * v
    return TruncPoly(m, N, d)


def packed_monomials(max_degree: int, m: int):
    """Monomials x_1^{a_1}...x_l^{a_l} with all a_i > 0, one per composition."""
    for c in compositions_upto(max_degree):
        if len(c) <= m:
            yield c, tuple(c) + (0,) * (m - len(c))


def read_qsym(coeffs: dict, max_degree: int, m: int) -> QSymElement:
    """Read a quasisymmetric polynomial from its packed coefficients (M basis)."""
    d = {}
    for c, mono in packed_monomials(max_degree, m):
        v = coeffs.get(mono, 0)
        if v:
            d[c] = v
    return QSymElement("M", d, max_degree)


def poly_to_qsym(p: TruncPoly, max_degree: int | None = None) -> QSymElement:
    N = p.N if max_degree is None else max_degree
    return read_qsym(p.terms, N, p.m)


@lru_cache(maxsize=None)
def oracle_basis_op(op: str, alpha: tuple, beta: tuple) -> tuple:
    """F_alpha (op) F_beta evaluated on the oracle, as F-basis terms."""
    rule = RULES[op]
    n = sum(alpha) + sum(beta)
    m = max(n, 1)
    pa = expand(F(alpha, n), m)
    pb = expand(F(beta, n), m)
    targets = [mono for c, mono in packed_monomials(n, m) if sum(c) == n]
    got = pa.combine_at(pb, targets, rule)
    e = m_to_f(read_qsym(got, n, m))
    return tuple(e.items())


def oracle_op(op: str, a: QSymElement, b: QSymElement, out_basis=None) -> QSymElement:
    return _bilinear(a, b, lambda x, y: oracle_basis_op(op, x, y), out_basis)


def _f_prec(alpha, beta):
    # the smallest variable sits in the left factor; 1 prec 1 = 0
    if not alpha:
        return ()
    if not beta:
        return ((alpha, 1),)
    return half_products_by_shuffles(alpha, beta)[0]


def _f_succeq(alpha, beta):
    if not alpha:
        return ((beta, 1),)
    if not beta:
        return ()
    return half_products_by_shuffles(alpha, beta)[1]


def prec(a: QSymElement, b: QSymElement) -> QSymElement:
    return _bilinear(a, b, _f_prec)


def succeq(a: QSymElement, b: QSymElement) -> QSymElement:
    return _bilinear(a, b, _f_succeq)


OPS = {"product": product, "prec": prec, "succeq": succeq, "bel": bel, "tvi": tvi}


def apply_op(op: str, a: QSymElement, b: QSymElement) -> QSymElement:
    return OPS[op](a, b)


# --- half-products from left and right shuffles -------------------------------


@lru_cache(maxsize=None)
def half_products_by_shuffles(alpha: tuple, beta: tuple) -> tuple:
    """(F_alpha prec F_beta, F_alpha succeq F_beta) as term tuples, from the
    left and right shuffles of representatives with pi_1 > sigma_1."""
    if not alpha or not beta:
        raise ValueError("both compositions must be nonempty")
    m = sum(beta)
    s = representative_perm(beta)
    p = representative_perm(alpha, offset=m)
    out = []
    for sh in (left_shuffles(p, s), right_shuffles(p, s)):
        d: dict = {}
        for t in sh:
            c = comp_of_perm(t)
            d[c] = d.get(c, 0) + 1
        out.append(tuple(sorted(d.items(), key=lambda kv: comp_key(kv[0]))))
    return tuple(out)


# --- coproduct and antipode ---------------------------------------------------


def coproduct(a: QSymElement) -> dict:
    """Deconcatenation coproduct, as {(alpha', alpha''): coefficient} in M."""
    out: dict = {}
    for c, v in a.to("M").items():
        for i in range(len(c) + 1):
            key = (c[:i], c[i:])
            out[key] = out.get(key, 0) + v
    return {k: exact(v) for k, v in out.items() if v != 0}


@lru_cache(maxsize=None)
def _antipode_m(alpha: tuple, N: int) -> QSymElement:
    if not alpha:
        return M((), N)
    acc = QSymElement.zero("M", N)
    for i in range(len(alpha)):
        acc = acc + product(_antipode_m(alpha[:i], N), M(alpha[i:], N))
    return -acc


@lru_cache(maxsize=None)
def _antipode_m_in_f(alpha: tuple, N: int) -> QSymElement:
    return _antipode_m(alpha, N).to("F")


def antipode(a: QSymElement) -> QSymElement:
    N = a.max_degree
    d: dict = {}
    for c, v in a.to("M").items():
        for b, k in _antipode_m_in_f(c, N).items():
            d[b] = d.get(b, 0) + k * v
    return QSymElement("F", d, N, a.truncated).to(a.basis)


def antipode_closed_form(alpha: tuple, N: int) -> QSymElement:
    """(-1)^l times the sum of M over coarsenings of the reversed composition."""
    rev = tuple(reversed(alpha))
    d = {c: (-1) ** len(alpha) for c in coarsenings(rev)} if alpha else {(): 1}
    return QSymElement("M", d, N)


def convolve(a: QSymElement, left: Callable, right: Callable, combine: Callable) -> QSymElement:
    """Sum over the coproduct of combine(left(a1), right(a2)).

    ``left`` and ``right`` must be linear and ``combine`` bilinear; terms are
    grouped by their left tensor factor.
    """
    N = a.max_degree
    groups: dict = {}
    for (c1, c2), v in coproduct(a).items():
        groups.setdefault(c1, {})[c2] = v
    acc = QSymElement.zero("F", N)
    for c1, d in groups.items():
        acc = acc + combine(left(M(c1, N).to("F")), right(QSymElement("M", d, N).to("F")))
    return acc


# --- identity checks ----------------------------------------------------------


def check_dendriform_axioms(a, b, c) -> bool:
    return (
        prec(a, b) + succeq(a, b) == product(a, b)
        and prec(prec(a, b), c) == prec(a, product(b, c))
        and prec(succeq(a, b), c) == succeq(a, prec(b, c))
        and succeq(a, succeq(b, c)) == succeq(product(a, b), c)
    )


def check_unit_rules(a: QSymElement) -> bool:
    one = QSymElement.one("F", a.max_degree)
    eps = a.counit()
    return (
        prec(one, a).is_zero()
        and prec(a, one) == a - eps
        and succeq(one, a) == a
        and succeq(a, one) == one.scale(eps)
    )


def _augmented(a: QSymElement) -> QSymElement:
    # drop the constant term; 1 prec 1 is a convention, not part of the identities
    return a - a.counit()


def check_beldend(a: QSymElement, b: QSymElement) -> bool:
    """sum over the coproduct of b of (S(b1) bel a) * b2 equals a prec b,
    for a without constant term."""
    a = _augmented(a)
    lhs = convolve(b, antipode, lambda x: x, lambda s, b2: product(bel(s, a), b2))
    return lhs == prec(a, b)


def check_tvidend(a: QSymElement, b: QSymElement) -> bool:
    """sum over the coproduct of b of (S(b1) tvi a) * b2 equals b succeq a,
    for a without constant term."""
    a = _augmented(a)
    lhs = convolve(b, antipode, lambda x: x, lambda s, b2: product(tvi(s, a), b2))
    return lhs == succeq(b, a)


def check_antipode(a: QSymElement) -> bool:
    lhs = convolve(a, antipode, lambda x: x, product)
    return lhs == QSymElement.one("F", a.max_degree).scale(a.counit())


def random_element(rng, max_size: int, N: int, terms: int = 3, basis: str = "F") -> QSymElement:
    comps = list(compositions_upto(max_size))
    d = {}
    for _ in range(terms):
        c = comps[rng.randrange(len(comps))]
        d[c] = d.get(c, 0) + Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return QSymElement(basis, d, N)

