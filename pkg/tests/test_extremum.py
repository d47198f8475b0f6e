import math
import random
from fractions import Fraction

import pytest

from extremalrmt import (CapExceeded, InvalidProfile, Pairing, VarianceProfile,
                         compute_params, extremal_bound, genus_exponent,
                         genus_histogram, iid_profile, kappa_table_rectangular,
                         kappa_table_symmetric, moment_hermitian,
                         moment_rect_real, moment_symmetric)
from extremalrmt.extremum import _reduce_sym, hermitian_polynomial
from extremalrmt.pairing import double_factorial, enumerate_pairings


def test_genus_exponent_base_cases():
    assert genus_exponent(Pairing.from_pairs([(1, 2), (3, 4)])) == 0
    assert genus_exponent(Pairing.from_pairs([(1, 4), (2, 3)])) == 0
    assert genus_exponent(Pairing.from_pairs([(1, 3), (2, 4)])) == 1
    for pi in enumerate_pairings(4):
        if pi.noncrossing:
            assert genus_exponent(pi) == 0


def test_genus_identity_vs_oracle():
    for d in (1, 2, 3):
        prof = iid_profile("hermitian", d)
        for p in (1, 2, 3, 4, 5):
            lhs = sum(cnt * Fraction(d) ** (p - 2 * ell)
                      for ell, cnt in genus_histogram(p))
            assert lhs == moment_hermitian(prof, p)


def test_hermitian_mass_equals_double_factorial():
    for p in range(1, 6):
        assert hermitian_polynomial(p).total_mass() == double_factorial(2 * p - 1)


def test_kappa_symmetric_small_orders():
    assert kappa_table_symmetric(1).coeffs == {(1, 0): 1}
    # golden table at p=2: two noncrossing pairings give sigma~^4 each, the
    # crossing splits into three sigma_*^4 terms plus one sigma^2 sigma_*^2
    assert kappa_table_symmetric(2).coeffs == {(0, 0): 3, (0, 1): 1, (2, 0): 2}


def test_type_2_split_trace_through():
    # the single crossing on 4 points: three plain terms and one product term
    reduced = _reduce_sym((2, 3, 0, 1))
    assert dict(((k, l), m) for k, l, m in reduced) == {(0, 0): 3, (0, 1): 1}


def test_kappa_rectangular_small_orders():
    assert kappa_table_rectangular(1).coeffs == {(0, 1): 1}
    assert kappa_table_rectangular(2).coeffs == {(0, 1): 1, (0, 2): 1, (1, 1): 1}


def test_kappa_symmetric_equality_at_iid():
    for p in (1, 2, 3, 4):
        tab = kappa_table_symmetric(p)
        for d in (1, 2, 3):
            val = tab.evaluate(sigma_tilde_sq=Fraction(d + 1), sigma_sq=Fraction(d))
            assert val == moment_symmetric(iid_profile("symmetric", d), p)


def test_kappa_rectangular_equality_at_iid():
    for p in (1, 2, 3, 4):
        tab = kappa_table_rectangular(p)
        for d1 in (1, 2, 3):
            for d2 in (1, 2, 3):
                val = tab.evaluate(sigma1_sq=Fraction(d1), sigma2_sq=Fraction(d2))
                assert val == moment_rect_real(iid_profile("rectangular", d1, d2), p)


def test_table_shape_invariants():
    for p in (1, 2, 3, 4):
        for tab in (kappa_table_symmetric(p), kappa_table_rectangular(p)):
            assert all(m > 0 for m in tab.coeffs.values())
            assert all(k >= 0 and l >= 0 and k + l <= p for k, l in tab.coeffs)
            assert tab.total_mass() >= double_factorial(2 * p - 1)


def test_tables_deterministic():
    a = kappa_table_symmetric.__wrapped__(3).coeffs
    b = kappa_table_symmetric.__wrapped__(3).coeffs
    assert a == b
    c = kappa_table_rectangular.__wrapped__(3).coeffs
    d = kappa_table_rectangular.__wrapped__(3).coeffs
    assert c == d


def test_reduction_cap():
    with pytest.raises(CapExceeded):
        kappa_table_symmetric(6)
    with pytest.raises(CapExceeded):
        kappa_table_rectangular(7)


def test_extremal_bound_equality_at_iid_symmetric():
    for d in (1, 2, 3):
        prof = iid_profile("symmetric", d)
        for p in (1, 2, 3):
            eb = extremal_bound(prof, p)
            exact = moment_symmetric(prof, p)
            assert eb.value == exact
            assert eb.ceiled_value == exact


def test_extremal_bound_rect_p1():
    prof = VarianceProfile.from_entries("rectangular", [[1, "0.5"], ["0.25", "0.5"]])
    prm = compute_params(prof)
    eb = extremal_bound(prof, 1)
    assert eb.value == prm.sigma2_sq  # single kappa(0,1) monomial
    assert moment_rect_real(prof, 1) <= eb.value


def test_extremal_bound_monotone_in_parameters():
    tab = kappa_table_symmetric(3)
    lo = tab.evaluate(sigma_tilde_sq=Fraction(2), sigma_sq=Fraction(1))
    hi = tab.evaluate(sigma_tilde_sq=Fraction(3), sigma_sq=Fraction(2))
    assert lo <= hi


def test_inequality_random_profiles():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 3)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = Fraction(rng.randint(0, 4), 4)
        mx = max(max(r) for r in rows)
        if mx == 0:
            continue
        rows = [[x / mx for x in row] for row in rows]
        prof = VarianceProfile.from_entries("symmetric", rows)
        for p in (1, 2, 3):
            assert moment_symmetric(prof, p) <= extremal_bound(prof, p).ceiled_value


def test_all_zero_profile_unrepresentable():
    with pytest.raises(InvalidProfile):
        VarianceProfile.from_entries("symmetric", [[0]])
