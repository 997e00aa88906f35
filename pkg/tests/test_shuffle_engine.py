from itertools import combinations, permutations
from math import comb

import pytest
from hypothesis import given, strategies as st

from shufflelab.perm_core import DESCENT_TAGS, statistic
from shufflelab.shuffle_engine import (
    DisjointnessError,
    Instance,
    NOTIONS,
    StatMultiset,
    certify,
    left_shuffles,
    lr_recursion_check,
    recheck_witness,
    right_shuffles,
    shuffles,
    stat_multiset,
)


@st.composite
def disjoint_pairs(draw, max_len=4):
    letters = draw(st.lists(st.integers(1, 30), unique=True, max_size=2 * max_len))
    k = draw(st.integers(0, len(letters)))
    return tuple(letters[:k]), tuple(letters[k:])


def brute_shuffles(p, s):
    # choose the positions taken by p
    n = len(p) + len(s)
    out = []
    for pos in combinations(range(n), len(p)):
        it_p, it_s = iter(p), iter(s)
        out.append(tuple(next(it_p) if i in pos else next(it_s) for i in range(n)))
    return sorted(out)


def test_shuffle_examples():
    assert set(shuffles((3, 1), (2, 6))) == {
        (3, 1, 2, 6), (3, 2, 1, 6), (3, 2, 6, 1), (2, 3, 1, 6), (2, 3, 6, 1), (2, 6, 3, 1)
    }
    assert set(left_shuffles((3, 1), (2, 6))) == {(3, 1, 2, 6), (3, 2, 1, 6), (3, 2, 6, 1)}
    assert set(right_shuffles((3, 1), (2, 6))) == {(2, 3, 1, 6), (2, 3, 6, 1), (2, 6, 3, 1)}
    assert shuffles((), (2, 1)) == [(2, 1)]
    assert left_shuffles((), (2, 1)) == []
    assert right_shuffles((1, 2), ()) == []


def test_disjointness_required():
    with pytest.raises(DisjointnessError):
        shuffles((1, 2), (2, 3))


def test_lr_recursions_examples():
    assert lr_recursion_check((3, 1), (2, 6))
    assert lr_recursion_check((1,), (2,))
    assert lr_recursion_check((5, 1), (4, 2, 3))


@given(disjoint_pairs())
def test_shuffles_against_position_choice(pair):
    p, s = pair
    sh = shuffles(p, s)
    assert sorted(sh) == brute_shuffles(p, s)
    assert len(sh) == comb(len(p) + len(s), len(p))
    lefts, rights = left_shuffles(p, s), right_shuffles(p, s)
    if p and s:
        assert sorted(lefts + rights) == sorted(sh)
    assert lr_recursion_check(p, s)


def test_shuffle_counts_for_every_letter_split():
    for total in range(8):
        for m in range(total + 1):
            for chosen in combinations(range(1, total + 1), m):
                rest = [x for x in range(1, total + 1) if x not in chosen]
                for p in permutations(chosen):
                    for s in permutations(rest):
                        assert len(shuffles(p, s)) == comb(total, m)


def test_multiset_difference():
    a = StatMultiset([1, 1, 2])
    assert a - StatMultiset([1]) == StatMultiset([1, 2])
    with pytest.raises(ValueError):
        StatMultiset([1]) - StatMultiset([1, 1])
    assert stat_multiset("des", [(1, 2), (2, 1)]) == StatMultiset([0, 1])


# verdicts observed by exhaustive search at total size 5
PASS_ALL = ("Des", "Lpk", "Epk", "Comp", "des", "comaj", "DesMaj")
SHUFFLE_ONLY = ("Pk", "Rpk", "maj")


@pytest.mark.parametrize("tag", PASS_ALL)
def test_compatible_statistics(tag):
    for notion in NOTIONS:
        r = certify(notion, tag, 5)
        assert r.verdict, (notion, tag)
        assert r.witness is None and recheck_witness(r)


@pytest.mark.parametrize("tag", SHUFFLE_ONLY)
def test_shuffle_only_statistics(tag):
    for notion in NOTIONS:
        r = certify(notion, tag, 5)
        assert r.verdict == (notion == "shuffle"), (notion, tag)
        if not r.verdict:
            assert recheck_witness(r)


def test_inv_weak_notions_only():
    for notion in NOTIONS:
        r = certify(notion, "inv", 5)
        assert r.verdict == (notion in ("weak-left", "weak-right")), notion


def test_known_counterexamples():
    r = certify("LR", "Pk", 4)
    assert not r.verdict
    assert r.has_violating_pair(Instance("pair", (4, 2, 3), (1,)), Instance("pair", (2, 3, 4), (1,)))
    r = certify("head-graft", "Pk", 4)
    assert r.has_violating_pair(Instance("graft", (2,), (3, 1)), Instance("graft", (2,), (3, 4)))
    assert statistic("Pk", (2, 3, 1)) != statistic("Pk", (2, 3, 4))
    r = certify("head-graft", "maj", 5)
    assert r.has_violating_pair(Instance("graft", (1,), (5, 4, 2, 3)), Instance("graft", (1,), (3, 4, 5, 2)))
    assert statistic("maj", (1, 5, 4, 2, 3)) == 5
    assert statistic("maj", (1, 3, 4, 5, 2)) == 4


def test_counterexample_pairs_share_their_class_key():
    # a non-violating pair (same value) is not reported
    r = certify("head-graft", "Pk", 4)
    assert not r.has_violating_pair(Instance("graft", (2,), (3, 1)), Instance("graft", (2,), (3, 1)))


def test_parallel_matches_serial():
    a = certify("shuffle", "Epk", 5)
    b = certify("shuffle", "Epk", 5, jobs=2)
    assert a.to_dict() == b.to_dict()


def test_certify_rejects_bad_input():
    with pytest.raises(ValueError):
        certify("sideways", "Des", 3)
    with pytest.raises(ValueError):
        certify("shuffle", "Foo", 3)
    with pytest.raises(ValueError):
        certify("shuffle", "Des", 0)


@pytest.mark.parametrize("tag", DESCENT_TAGS)
def test_report_dicts_are_plain(tag):
    import json
    r = certify("left", tag, 4)
    json.dumps(r.to_dict())
    json.dumps(r.classes_as_dicts(5))
