import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremalrmt import (CapExceeded, Crossing, CrossingClass, NotACrossing,
                         Pairing, Taxonomy, catalan_chi, catalan_number,
                         classify_crossing, double_factorial,
                         enumerate_pairings)


@pytest.mark.parametrize("p", range(0, 7))
def test_enumeration_counts(p):
    total = 0
    noncross = 0
    seen = set()
    for pi in enumerate_pairings(p):
        total += 1
        noncross += pi.noncrossing
        seen.add(pi.partner)
    assert total == double_factorial(2 * p - 1)
    assert noncross == catalan_number(p)
    assert len(seen) == total  # all distinct


def test_enumeration_canonical_order():
    first = next(enumerate_pairings(2))
    # smallest point pairs first, partner ascending
    assert first.pairs() == [(1, 2), (3, 4)]
    assert [pi.pairs() for pi in enumerate_pairings(1)] == [[(1, 2)]]


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        list(enumerate_pairings(9))
    # explicit override allows it
    gen = enumerate_pairings(9, p_max=9)
    next(gen)


def test_crossings_examples():
    assert Pairing.from_pairs([(1, 2), (3, 4)]).crossings() == []
    assert Pairing.from_pairs([(1, 3), (2, 4)]).crossings() == [Crossing(1, 2, 3, 4)]
    got = Pairing.from_pairs([(1, 4), (2, 6), (3, 5)]).crossings()
    assert got == [Crossing(1, 2, 4, 6), Crossing(1, 3, 4, 5)]


def test_crossings_exhaustive_definition():
    # compare the listed crossings with an exhaustive scan over pair pairs
    for pi in enumerate_pairings(4):
        pairs = pi.pairs()
        expected = []
        for x in range(len(pairs)):
            for y in range(len(pairs)):
                i, k = pairs[x]
                j, l = pairs[y]
                if i < j < k < l:
                    expected.append(Crossing(i, j, k, l))
        assert sorted(expected) == pi.crossings()


def test_classify_self_adjoint():
    pi = Pairing.from_pairs([(1, 3), (2, 4)])
    assert classify_crossing(pi, Crossing(1, 2, 3, 4), Taxonomy.SELF_ADJOINT) \
        is CrossingClass.SYM_TYPE_2
    # straddling pair {4,6}: 4 strictly inside (3,5), 6 outside
    pi2 = Pairing.from_pairs([(1, 3), (2, 5), (4, 6)])
    assert classify_crossing(pi2, Crossing(1, 2, 3, 5), Taxonomy.SELF_ADJOINT) \
        is CrossingClass.SYM_TYPE_1


def test_classify_rectangular():
    pi = Pairing.from_pairs([(1, 3), (2, 4)])
    assert classify_crossing(pi, Crossing(1, 2, 3, 4), Taxonomy.RECTANGULAR) \
        is CrossingClass.RECT_TYPE_3
    pi2 = Pairing.from_pairs([(1, 4), (3, 6), (2, 5)])
    assert classify_crossing(pi2, Crossing(2, 3, 5, 6), Taxonomy.RECTANGULAR) \
        is CrossingClass.RECT_TYPE_1


def test_classify_rejects_non_crossing():
    pi = Pairing.from_pairs([(1, 2), (3, 4)])
    with pytest.raises(NotACrossing):
        classify_crossing(pi, Crossing(1, 2, 3, 4), Taxonomy.RECTANGULAR)


@pytest.mark.parametrize("taxonomy", [Taxonomy.SELF_ADJOINT, Taxonomy.RECTANGULAR])
def test_classification_total(taxonomy):
    # every crossing receives exactly one class, never an exception
    for pi in enumerate_pairings(4):
        for x in pi.crossings():
            cls = classify_crossing(pi, x, taxonomy)
            assert isinstance(cls, CrossingClass)


def test_noncrossing_has_consecutive_pair():
    for p in range(1, 6):
        for pi in enumerate_pairings(p):
            if pi.noncrossing:
                assert any(b == a + 1 for a, b in pi.pairs())


def test_catalan_chi_values():
    assert catalan_chi(0) == 1
    assert catalan_chi(2) == Fraction(1, 8)
    assert catalan_chi(3) == Fraction(5, 64)
    for p in range(8):
        assert catalan_chi(p) == Fraction(catalan_number(p), 4 ** p)


def test_chi_stirling_window():
    # spot checks of the [1e3, 1e4] sweep done in full by the acceptance suite
    for p in (1000, 2500, 10000):
        v = float(catalan_chi(p)) * p ** 1.5 * math.sqrt(math.pi)
        assert 0.9 < v < 1.1


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_pairing_involution_property(p, skip):
    pis = list(enumerate_pairings(min(p, 4)))
    pi = pis[skip % len(pis)]
    for i, j in enumerate(pi.partner):
        assert pi.partner[j] == i and j != i


def test_invalid_pairing_rejected():
    with pytest.raises(Exception):
        Pairing(1, (0, 0))
    with pytest.raises(Exception):
        Pairing.from_pairs([(1, 2), (2, 3)])
