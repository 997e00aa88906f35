from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shufflelab.compositions import compositions
from shufflelab.kernel_lab import (
    SpanBasis,
    bel_tvi_criterion,
    epk_f_generators,
    epk_m_generators,
    equivalence_classes,
    ideal_matrix,
    implication_checks,
    is_m_binomial,
    is_op_ideal,
    kernel_component,
    kernel_generators,
    kernel_in_m,
    m_through_f_checks,
    rank,
    shuffle_algebra_dimension,
)
from shufflelab.lacunar_sets import fibonacci
from shufflelab.perm_core import DESCENT_TAGS
from shufflelab.qsym_algebra import F, QSymElement
from shufflelab.shuffle_engine import NOTIONS, certify

vectors = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=6)


def brute_rank(rows):
    # plain Gaussian elimination over Fractions
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(4):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                k = m[i][c] / m[r][c]
                m[i] = [a - k * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


@given(vectors)
def test_rank_against_elimination(rows):
    assert rank(rows, 4) == brute_rank(rows)


@given(vectors)
def test_null_space_annihilates(rows):
    s = SpanBasis(range(4))
    for v in rows:
        s.add({i: x for i, x in enumerate(v) if x})
    null = s.null_space()
    assert len(null) == 4 - s.dim
    for w in null:
        for v in rows:
            assert sum(a * b for a, b in zip(v, w)) == 0
    assert s.same_span(SpanBasis.spanned_by(range(4), [r for r in s.rows.values()]))


def test_epk_kernel_small():
    # compositions of 4: 8, classes: |L_4| = 7
    assert kernel_component("Epk", 4).dim == 1
    assert kernel_generators("Epk", 4) == [F((1, 1, 2), 4) - F((1, 3), 4)]
    assert shuffle_algebra_dimension("Epk", 4) == 7


def test_des_kernel_is_zero():
    for n in range(1, 7):
        assert kernel_component("Des", n).dim == 0
        assert shuffle_algebra_dimension("Des", n) == 2 ** (n - 1)
        assert shuffle_algebra_dimension("des", n) == n


def test_classes_partition_compositions():
    for tag in DESCENT_TAGS:
        for n in range(1, 6):
            cls = equivalence_classes(tag, n)
            flat = sorted(c for g in cls for c in g)
            assert flat == sorted(compositions(n))
            assert kernel_component(tag, n).dim == len(flat) - len(cls)


def test_epk_generating_sets():
    for n in range(1, 8):
        k = kernel_component("Epk", n)
        assert epk_f_generators(n).same_span(k)
        assert epk_m_generators(n).same_span(k)
        assert shuffle_algebra_dimension("Epk", n) == fibonacci(n + 2) - 1


def test_m_through_f():
    for n in (1, 3, 5):
        assert m_through_f_checks(n, oracle=True)
    assert m_through_f_checks(7)


def test_ideal_verdicts_with_witness():
    v = is_op_ideal("maj", "prec", "left", 5)
    assert not v.holds
    assert v.witness.result == F((1, 1, 1, 2), 5) - F((1, 3, 1), 5)
    assert is_op_ideal("Epk", "prec", "both", 5).holds
    assert is_op_ideal("Des", "bel", "left", 5).holds
    with pytest.raises(ValueError):
        is_op_ideal("Epk", "cup", "left", 5)
    with pytest.raises(ValueError):
        is_op_ideal("inv", "prec", "left", 5)


def test_rpk_not_a_right_prec_ideal():
    v = is_op_ideal("Rpk", "prec", "right", 5)
    assert not v.holds
    assert v.witness.generator == F((1, 2), 5) - F((3,), 5)
    assert v.witness.multiplier == F((1,), 5)


def test_ideal_matrix_and_criterion():
    mat = ideal_matrix(5)
    assert mat.to_dict()["composition_criterion_agrees"]
    for tag in ("Des", "des", "DesMaj", "Epk"):
        for op in ("product", "prec", "succeq", "bel", "tvi"):
            assert mat.verdict(tag, op, "both")
    assert mat.verdict("maj", "bel", "right") and not mat.verdict("maj", "bel", "left")
    assert bel_tvi_criterion("Lpk", "tvi", "left", 5) and not bel_tvi_criterion("Lpk", "tvi", "right", 5)
    tsv = mat.to_tsv()
    assert tsv.splitlines()[0].startswith("statistic\tproduct:left")


def test_m_binomial_small():
    for tag in ("Des", "des", "Epk"):
        for n in range(1, 6):
            r = is_m_binomial(tag, n)
            assert r.verdict and r.certificate_rank == r.kernel_dim
    r = is_m_binomial("maj", 4)
    assert not r.verdict and r.certificate_rank < r.kernel_dim
    assert kernel_in_m("DesMaj", 4).dim == 0


def test_m_binomial_certificates_lie_in_kernel():
    r = is_m_binomial("Epk", 5)
    K = kernel_in_m("Epk", 5)
    for j, lam, k, mu in r.certificate:
        e = {j: lam} if k is None else {j: lam, k: mu}
        assert K.contains_element(QSymElement("M", e, 5))


def test_implications_at_size_five():
    tags = ("Des", "Pk", "maj", "Epk", "inv")
    cert = {(n, t): certify(n, t, 5).verdict for n in NOTIONS for t in tags}
    rows = implication_checks(cert, ideal_matrix(5, [t for t in tags if t != "inv"]))
    assert rows and all(ok for _, _, ok in rows)
    names = {name for name, _, _ in rows}
    assert "shuffle agrees with product-ideal" in names


def test_rpk_half_product_value():
    # computed on both routes; the result leaves the Rpk kernel
    from shufflelab.qsym_algebra import oracle_op, prec
    m = F((1, 2), 5) - F((3,), 5)
    val = prec(m, F((1,), 5))
    assert val == oracle_op("prec", m, F((1,), 5))
    assert val == F((1, 1, 2), 5) + F((1, 2, 1), 5) - F((2, 2), 5) - F((3, 1), 5)
    assert kernel_component("Rpk", 3).contains_element(m.homogeneous(3))
    assert not kernel_component("Rpk", 4).contains_element(val)


def test_first_non_binomial_degrees():
    assert [n for n in range(1, 7) if not is_m_binomial("maj", n).verdict][:1] == [4]
    assert [n for n in range(1, 7) if not is_m_binomial("DesMaj", n).verdict][:1] == [5]
    # at n = 4 every (des,maj) class is a singleton
    assert kernel_component("DesMaj", 4).dim == 0
