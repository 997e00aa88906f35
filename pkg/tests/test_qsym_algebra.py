import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shufflelab.compositions import compositions_upto
from shufflelab.qsym_algebra import (
    F,
    M,
    QSymElement,
    antipode,
    antipode_closed_form,
    bel,
    check_antipode,
    check_beldend,
    check_dendriform_axioms,
    check_tvidend,
    check_unit_rules,
    coproduct,
    expand,
    half_products_by_shuffles,
    oracle_op,
    poly_to_qsym,
    prec,
    product,
    succeq,
    tvi,
)

N = 6
COMPS = [c for c in compositions_upto(3) if c]


@st.composite
def elements(draw, basis="F", max_size=3):
    comps = [c for c in compositions_upto(max_size)]
    picks = draw(st.lists(st.sampled_from(comps), min_size=1, max_size=3))
    coeffs = draw(st.lists(st.integers(-4, 4), min_size=len(picks), max_size=len(picks)))
    d = {}
    for c, k in zip(picks, coeffs):
        d[c] = d.get(c, 0) + k
    return QSymElement(basis, d, N)


def test_expansion_in_two_variables():
    # F_(2) = x1^2 + x1 x2 + x2^2, M_(2) = x1^2 + x2^2
    assert expand(F((2,), 2), 2).terms == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert expand(M((2,), 2), 2).terms == {(2, 0): 1, (0, 2): 1}
    assert expand(F((1, 1), 2), 2).terms == {(1, 1): 1}


def test_basis_change():
    assert M((2,), 3) == F((2,), 3) - F((1, 1), 3)
    assert F((1, 2), 5).to("M") == M((1, 2), 5) + M((1, 1, 1), 5)
    for c in compositions_upto(5):
        assert F(c, 5).to("M").to("F") == F(c, 5)


def test_product_example():
    assert F((2,), 3) * F((1,), 3) == F((3,), 3) + F((1, 2), 3) + F((2, 1), 3)
    assert M((1,), 2) * M((1,), 2) == M((2,), 2) + M((1, 1), 2).scale(2)


def test_runic_examples():
    assert bel(F((1, 2), N), F((2,), N)) == F((1, 4), N)
    assert tvi(F((1, 2), N), F((2,), N)) == F((1, 2, 2), N)
    assert tvi(M((1,), N), M((2,), N)) == M((1, 2), N)
    assert bel(M((1,), N), M((1,), N)) == M((1, 1), N) + M((2,), N)


def test_antipode_example():
    assert antipode(M((1,), N)) == -M((1,), N)
    assert antipode(M((1, 2), N)) == M((2, 1), N) + M((3,), N)


def test_truncation_flag():
    x = F((2,), 3) * F((2,), 3)
    assert x.is_zero() and x.truncated
    assert not (F((1,), 3) * F((1,), 3)).truncated


def test_text_roundtrip():
    x = F((1, 2), N).scale(Fraction(3, 2)) - F((3,), N)
    assert QSymElement.from_text(x.to_text(), N) == x
    with pytest.raises(ValueError):
        QSymElement.from_text("F 1*[1] 2*[1]")


def test_half_products_two_routes():
    # oracle on polynomials versus left and right shuffles
    for a in COMPS:
        for b in COMPS:
            lo, hi = half_products_by_shuffles(a, b)
            assert oracle_op("prec", F(a, N), F(b, N)) == QSymElement("F", dict(lo), N), (a, b)
            assert oracle_op("succeq", F(a, N), F(b, N)) == QSymElement("F", dict(hi), N), (a, b)


def test_half_products_with_units_match_oracle():
    one = F((), N)
    for a in [()] + COMPS:
        x = F(a, N)
        for op, fn in (("prec", prec), ("succeq", succeq)):
            assert fn(x, one) == oracle_op(op, x, one), (op, a)
            assert fn(one, x) == oracle_op(op, one, x), (op, a)


def test_runic_rules_agree_with_oracle():
    for a in COMPS:
        for b in COMPS:
            for op, fn in (("bel", bel), ("tvi", tvi), ("product", product)):
                x, y = F(a, N), F(b, N)
                assert fn(x, y) == oracle_op(op, x, y), (op, a, b)
                assert fn(x.to("M"), y.to("M")) == oracle_op(op, x, y), (op, a, b)


def test_product_via_polynomials():
    for a in COMPS:
        for b in COMPS:
            n = sum(a) + sum(b)
            pa, pb = expand(F(a, n), n), expand(F(b, n), n)
            assert poly_to_qsym(pa * pb).to("F").homogeneous(n) == product(F(a, n), F(b, n))


def test_antipode_closed_form():
    for c in compositions_upto(5):
        assert antipode(M(c, 5)) == antipode_closed_form(c, 5)


def test_coproduct_deconcatenates():
    assert coproduct(M((1, 2), 3)) == {((), (1, 2)): 1, ((1,), (2,)): 1, ((1, 2), ()): 1}


@settings(max_examples=30, deadline=None)
@given(elements(max_size=2), elements(max_size=2), elements(max_size=2))
def test_dendriform_axioms(a, b, c):
    assert check_dendriform_axioms(a, b, c)


@settings(max_examples=30, deadline=None)
@given(elements(), elements())
def test_runic_dendriform_identities(a, b):
    assert check_beldend(a, b)
    assert check_tvidend(a, b)


@settings(max_examples=30, deadline=None)
@given(elements(basis="M"))
def test_antipode_and_units(a):
    assert check_antipode(a)
    assert check_unit_rules(a.to("F"))


@settings(max_examples=40, deadline=None)
@given(elements(), elements(), elements(max_size=1))
def test_product_associative_and_commutative(a, b, c):
    assert product(a, b) == product(b, a)
    assert product(product(a, b), c) == product(a, product(b, c))


def test_seeded_random_elements():
    from shufflelab.qsym_algebra import random_element
    rng = random.Random(7)
    for _ in range(10):
        a = random_element(rng, 3, N)
        b = random_element(rng, 3, N, basis="M")
        assert check_beldend(a, b) and check_tvidend(a, b)
