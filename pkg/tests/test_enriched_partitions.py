from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from shufflelab.enriched_partitions import (
    INF,
    AlphabetSpec,
    CapMismatch,
    LabeledPoset,
    PowPoly,
    ZLetter,
    amenable_fiber_counts,
    at_caps,
    diamond_poset,
    enumerate_enriched,
    epk_alphabet,
    epk_formula_poly,
    fe_exist_construct,
    fiber_ends,
    fiber_ends_by_fibers,
    fiberends_equivalence,
    fund_lem_check,
    gamma_equals_k,
    gamma_perm,
    iex_checks,
    is_enriched,
    is_pi_amenable,
    joint_lindep_rank,
    K_poly,
    K_poly_concrete,
    k_product_example,
    lindep_rank,
    parse_letter,
    prod1_check,
    product_rule_check,
    shifted_qsf,
    var_index,
)
from shufflelab.lacunar_sets import enumerate_Ln
from shufflelab.perm_core import exterior_peaks, standard_perms

PRESETS = ("ordinary", "stembridge", "petersen", "epk")


def brute_enriched(P, spec):
    # every map into the alphabet, filtered by the defining conditions
    letters = spec.letters()
    out = []
    for f in product(letters, repeat=len(P.elements)):
        if is_enriched(P, dict(zip(P.elements, f))):
            out.append(f)
    return sorted(out, key=lambda t: [q.key() for q in t])


def test_alphabet_order():
    letters = epk_alphabet(1).letters()
    assert [str(q) for q in letters] == ["+0", "-1", "+1", "-inf"]
    assert parse_letter("-inf") == ZLetter(INF, "-")
    assert parse_letter("+2") < parse_letter("-3")
    with pytest.raises(ValueError):
        parse_letter("2")
    with pytest.raises(ValueError):
        AlphabetSpec("martian", 2)


def test_size_one_chain():
    chain = LabeledPoset.chain((1,))
    assert len(enumerate_enriched(chain, epk_alphabet(1))) == 4


def test_diamond_membership():
    # a is the bottom, b the top, c and d in between
    P = diamond_poset()
    f = dict(zip("abcd", [parse_letter(s) for s in ("+2", "-3", "+2", "-3")]))
    assert is_enriched(P, f)
    assert f in [dict(zip(P.elements, t)) for t in enumerate_enriched(P, AlphabetSpec("stembridge", 3))]
    g = dict(f, b=parse_letter("+1"))
    assert not is_enriched(P, g)


def test_antichain_ordinary_count():
    P = LabeledPoset.antichain((1, 2))
    assert len(enumerate_enriched(P, AlphabetSpec("ordinary", 2))) == 4


@pytest.mark.parametrize("preset", PRESETS)
def test_enumeration_matches_brute_force(preset):
    spec = AlphabetSpec(preset, 2)
    for P in (LabeledPoset.chain((2, 1, 3)), LabeledPoset.chain((1, 3, 2)), diamond_poset((3, 1, 4, 2))):
        assert enumerate_enriched(P, spec) == brute_enriched(P, spec)


def test_poset_validation():
    with pytest.raises(ValueError):
        LabeledPoset((1, 2), [(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        LabeledPoset((1, 2), [], {1: 5, 2: 5})


def test_gamma_of_single_point():
    assert gamma_perm((1,), 2).to_text() == PowPoly.from_text(gamma_perm((1,), 2).to_text(), 2).to_text()
    # x0 + 2 x1 + 2 x2 + xinf
    want = PowPoly(2, {(1, 0, 0, 0): 1, (0, 1, 0, 0): 2, (0, 0, 1, 0): 2, (0, 0, 0, 1): 1})
    assert gamma_perm((1,), 2) == want
    assert var_index(INF, 2) == 3


def test_fiber_ends_examples():
    assert fiber_ends((0, 0, 1, 1, INF)) == fiber_ends_by_fibers((0, 0, 1, 1, INF))
    assert fiber_ends((1, 1, 1)) == (1, 3)
    assert fiber_ends((0, 0, 0)) == (3,)
    assert fiber_ends((INF, INF)) == (1,)
    with pytest.raises(ValueError):
        fiber_ends((2, 1))


def test_amenable_examples():
    assert is_pi_amenable((1, 1, 1), (3, 1, 2))
    assert not is_pi_amenable((1, 1, 1), (1, 3, 2))
    assert is_pi_amenable((0, 0, INF), (1, 2, 3))
    assert not is_pi_amenable((INF, INF), (1, 2))


def test_fe_exist_examples():
    assert fe_exist_construct(3, {1, 3}) == (0, 1, 1)
    assert fiber_ends((0, 1, 1)) == (1, 2, 3)
    assert fe_exist_construct(1, {1}) == (0,)
    assert fe_exist_construct(4, {1, 3}) == (0, 1, 1, INF)
    assert fiber_ends((0, 1, 1, INF)) == (1, 2, 3, 4)
    for n in range(1, 7):
        for lam in enumerate_Ln(n):
            g = fe_exist_construct(n, lam)
            want = tuple(sorted({x for l in lam for x in (l, l + 1) if x <= n}))
            assert fiber_ends(g) == want
    with pytest.raises(ValueError):
        fe_exist_construct(3, {1, 2})


def test_k_two_routes():
    for n in range(0, 5):
        for lam in enumerate_Ln(n):
            for cap in (n, n + 1):
                assert K_poly(n, lam, cap) == K_poly_concrete(n, lam, cap)


def test_gamma_equals_k_small():
    for n in range(0, 5):
        assert at_caps(gamma_equals_k, n, cap=n)


def test_epk_formula_and_amenable_counts():
    for n in range(1, 4):
        for p in standard_perms(n):
            assert epk_formula_poly(p, n) == gamma_perm(p, n)
            assert amenable_fiber_counts(p, n)


def test_k_product_example():
    assert k_product_example(3) and k_product_example(4)


def test_product_rule_examples():
    assert product_rule_check((2, 1), (3,), 3)
    assert product_rule_check((1, 3), (2, 4), 4)
    assert product_rule_check((2,), (1, 3), AlphabetSpec("stembridge", 3))


def test_iex_and_fiberends():
    for n in range(1, 5):
        assert iex_checks(n)
    for n in range(1, 5):
        assert fiberends_equivalence(n)


def test_lindep_ranks():
    assert [lindep_rank(n) for n in range(6)] == [len(enumerate_Ln(n)) for n in range(6)]
    assert joint_lindep_rank(4) == sum(len(enumerate_Ln(n)) for n in range(5))


@pytest.mark.parametrize("preset", PRESETS)
def test_fundamental_lemma_on_diamond(preset):
    assert fund_lem_check(diamond_poset(), AlphabetSpec(preset, 2))


def test_disjoint_union_product():
    spec = AlphabetSpec("epk", 2)
    assert prod1_check(LabeledPoset.chain((2, 1)), LabeledPoset.chain((1, 3, 2)), spec)
    assert prod1_check(LabeledPoset.antichain((1, 2)), LabeledPoset.chain((1,)), AlphabetSpec("ordinary", 2))


def test_shifted_quasisymmetric_match():
    for n in range(1, 5):
        for lam in enumerate_Ln(n):
            assert shifted_qsf(n, lam, 3) == K_poly(n, lam, 3).kill_ends()


def test_cap_mismatch_is_reported():
    def depends_on_cap(cap):
        return cap
    with pytest.raises(CapMismatch):
        at_caps(depends_on_cap, cap=3)


@settings(max_examples=25, deadline=None)
@given(st.permutations((1, 2, 3, 4)))
def test_gamma_depends_only_on_epk(p):
    p = tuple(p)
    assert gamma_perm(p, 4) == K_poly(4, exterior_peaks(p), 4)


def test_powpoly_text_roundtrip():
    x = K_poly(3, {2}, 3)
    assert PowPoly.from_text(x.to_text(), 3) == x
    assert PowPoly(3).to_text() == "0"
    assert (x - x).is_zero()
