import math
from fractions import Fraction

import pytest

from extremalrmt import (CapExceeded, DimensionError, build_table, iid_profile,
                         moment_rect_complex, moment_rect_real, mp_moment,
                         proof_params, verify_bounds)
from extremalrmt.wishart import float_moment_path, log_mp_asymptote


def test_initial_conditions():
    t = build_table(2, 2, 3)
    assert t.A[0] == 1 and t.A[1] == t.c
    assert t.Aprime[0] == Fraction(1, 2)
    assert t.Aprime[1] == Fraction(1, 2) * (t.c - Fraction(1, 2))
    assert t.B[0] == 1 and t.B[1] == t.c
    assert t.B[2] == Fraction(5, 2)  # (c + 1 + 1/n) c at n = 2, c = 1
    assert t.D[0] == Fraction(1, 2)
    assert t.D[1] == Fraction(3, 4)  # (1/n)(c + 1 - 1/n)


def test_a2_closed_form():
    # second-order complex moment is c(c+1) for every n
    for n, m in ((2, 2), (3, 6), (5, 10)):
        t = build_table(n, m, 2)
        assert t.A[2] == t.c * (t.c + 1)


def test_recursions_match_oracle():
    for n in (1, 2, 3):
        for m in range(n, 4):
            t = build_table(n, m, 4)
            prof = iid_profile("rectangular", n, m)
            for p in range(5):
                assert t.trace_moment_complex(p) == moment_rect_complex(n, m, p)
                assert t.trace_moment_real(p) == moment_rect_real(prof, p)


def test_b_equals_d_plus_aprime_and_order():
    for n, m in ((2, 2), (4, 6), (10, 15), (7, 70)):
        t = build_table(n, m, 60)
        for p in range(61):
            assert t.B[p] == t.D[p] + t.Aprime[p]
            assert t.D[p] >= 0
            assert t.Aprime[p] <= t.A[p]


def test_factorization_identities_exact():
    # lambda lambda_bar and mu mu_bar as exact rationals
    for n, m in ((3, 6), (5, 20)):
        c = Fraction(m, n)
        for p in (1, 5, 11):
            assert (c - 1) ** 2 - Fraction(p * p, n * n) == \
                (c + 1) ** 2 - (4 * c + Fraction(p * p, n * n))
            assert (c - 1) ** 2 - 4 * Fraction(p * p, n * n) == \
                (c + 1) ** 2 - 4 * (c + Fraction(p * p, n * n))


def test_proof_params():
    t = build_table(10, 40, 35)
    pp = proof_params(t, 5)
    assert pp.regime == "small"  # 5 < (4-1)*10
    assert pp.lam + pp.lam_bar == pytest.approx(2 * (4 + 1))
    assert pp.lam * pp.lam_bar == pytest.approx((4 - 1) ** 2 - 0.25)
    assert pp.mu + pp.mu_bar == pytest.approx(2 * (4 + 1))
    pp2 = proof_params(t, 31)
    assert pp2.regime == "large"


def test_k_ratio_recursion_identity():
    # ratio definition agrees with the closed recursion
    t = build_table(4, 8, 30)
    K = t.k_ratios()
    assert K[1] == 2 * (t.c + 1)
    for p in range(2, 30):
        coeff = Fraction(1) - Fraction(3, 4 * p * p - 1)
        rec = 2 * (t.c + 1) - coeff * ((t.c - 1) ** 2 - Fraction(p * p, 16)) / K[p - 1]
        assert K[p] == rec


def test_verify_bounds_envelope_square_case():
    t = build_table(50, 50, 200)
    rep = verify_bounds(t)
    assert rep.k_lemma_violations == 0
    assert max(rep.log_ratio_complex.values()) < math.log(40)
    assert max(rep.log_ratio_real.values()) < math.log(40)
    # limiting-moment tightness in the moderate-order window
    assert min(rep.mp_log_ratio_complex[p] for p in range(20, 201)) > -math.log(40)


def test_dimension_and_cap_errors():
    with pytest.raises(DimensionError):
        build_table(3, 2, 5)
    with pytest.raises(CapExceeded):
        build_table(2, 2, 501)


def test_mp_moment_values():
    assert mp_moment(1, 1) == pytest.approx(1.0)
    assert mp_moment(1, 2) == pytest.approx(2.0)
    assert mp_moment(2, 2) == pytest.approx(6.0)  # c (c + 1)
    assert mp_moment(1, 6) == pytest.approx(132.0, rel=1e-3)  # Catalan C_6


def test_mp_asymptote_matches_mp_moment():
    # the limiting moment approaches its large-order asymptote
    for p in (30, 50):
        exact = math.log(mp_moment(1, p, big_n=10 ** 4, p_cap=60))
        assert exact == pytest.approx(log_mp_asymptote(1.0, p), abs=0.05)


def test_float_moment_path_tracks_exact():
    A, B, D = float_moment_path(6, 9, 40)
    t = build_table(6, 9, 40)
    for p in (1, 10, 25, 40):
        assert float(A[p]) == pytest.approx(float(t.A[p]), rel=1e-25)
        assert float(B[p]) == pytest.approx(float(t.B[p]), rel=1e-25)
