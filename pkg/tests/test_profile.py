import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremalrmt import (DimensionError, InvalidProfile, Kind, VarianceProfile,
                         band_profile, block_diagonal_profile, compute_params,
                         iid_profile, loads_profile, make_profile,
                         spiked_profile)


def test_params_all_ones_rectangular():
    p = compute_params(iid_profile("rectangular", 3, 5))
    assert p.sigma1_sq == 3
    assert p.sigma2_sq == 5
    assert p.sigma_star_sq == 1


def test_params_all_ones_symmetric():
    for d in (1, 2, 4):
        p = compute_params(iid_profile("symmetric", d))
        assert p.sigma_sq == d
        assert p.sigma_tilde_sq == d + 1
        assert p.sigma_star_sq == 1


def test_params_band_interior_rows():
    # n >= 2k+1 so interior rows dominate: both square sums equal 2k+1
    for k in (0, 1, 3):
        n = 2 * k + 5
        p = compute_params(band_profile("rectangular", n, k))
        assert p.sigma1_sq == 2 * k + 1
        assert p.sigma2_sq == 2 * k + 1
        assert p.sigma_star_sq == 1


def test_band_zero_width_is_identity_pattern():
    prof = band_profile("symmetric", 5, 0)
    assert np.array_equal(prof.b, np.eye(5))


def test_block_diagonal_pattern():
    prof = block_diagonal_profile("rectangular", 4, 4, 2, 2)
    expect = np.zeros((4, 4))
    expect[:2, :2] = 1
    expect[2:, 2:] = 1
    assert np.array_equal(prof.b, expect)


def test_block_diagonal_divisibility_errors():
    with pytest.raises(DimensionError):
        block_diagonal_profile("rectangular", 5, 6, 2, 2)
    with pytest.raises(DimensionError):
        block_diagonal_profile("rectangular", 4, 3, 2, 2)


def test_spiked_profile_squares():
    prof = spiked_profile(4, 1.0)
    sq = prof.b ** 2
    assert np.allclose(sq[0, :], 2 / 4)
    assert np.allclose(sq[1:, :], 1 / 4)
    with pytest.raises(Exception):
        prof.exact_entries()  # float-only source


def test_make_profile_dispatch():
    prof = make_profile("symmetric", {"pattern": "band", "n": 4, "k": 1})
    assert prof.kind is Kind.SYMMETRIC
    with pytest.raises(InvalidProfile):
        make_profile("symmetric", {"pattern": "nope"})


def test_profile_validation():
    with pytest.raises(InvalidProfile):
        VarianceProfile.from_entries("symmetric", [[1, 2], [3, 1]])  # asymmetric
    with pytest.raises(InvalidProfile):
        VarianceProfile.from_entries("rectangular", [[1, -1]])
    with pytest.raises(InvalidProfile):
        VarianceProfile.from_entries("rectangular", [[0, 0], [0, 0]])
    with pytest.raises(InvalidProfile):
        VarianceProfile(Kind.HERMITIAN, 2, 3, np.ones((2, 3)))


def test_json_roundtrip_and_decimal_exactness():
    doc = {"kind": "rectangular", "n": 1, "m": 2, "b": [0.1, 1]}
    prof = loads_profile(json.dumps(doc))
    # decimal literal is read exactly, not as the binary double
    assert prof.exact_entries()[0][0] == Fraction(1, 10)
    assert prof.b[0, 0] == pytest.approx(0.1)


def test_json_rejects_nan_and_negative():
    with pytest.raises(InvalidProfile):
        loads_profile('{"kind": "rectangular", "n": 1, "m": 1, "b": [NaN]}')
    with pytest.raises(InvalidProfile):
        loads_profile('{"kind": "rectangular", "n": 1, "m": 1, "b": [-2]}')
    with pytest.raises(InvalidProfile):
        loads_profile('{"kind": "rectangular", "n": 2, "m": 2, "b": [1, 1]}')


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_params_permutation_invariant(n, m, seed):
    rng = np.random.default_rng(seed)
    rows = [[Fraction(int(v), 4) for v in rng.integers(0, 8, m)] for _ in range(n)]
    if not any(any(r) for r in rows):
        rows[0][0] = Fraction(1)
    prof = VarianceProfile.from_entries("rectangular", rows)
    perm_r = rng.permutation(n)
    perm_c = rng.permutation(m)
    shuffled = [[rows[i][j] for j in perm_c] for i in perm_r]
    prof2 = VarianceProfile.from_entries("rectangular", shuffled)
    assert compute_params(prof) == compute_params(prof2)


@given(st.integers(1, 3), st.fractions(min_value=Fraction(1, 8), max_value=4))
@settings(max_examples=30, deadline=None)
def test_params_scaling_quadratic(d, s):
    prof = band_profile("symmetric", 2 * d + 1, d - 1)
    base = compute_params(prof)
    scaled = compute_params(prof.scaled(s))
    assert scaled.sigma_sq == base.sigma_sq * s * s
    assert scaled.sigma_tilde_sq == base.sigma_tilde_sq * s * s
    assert scaled.sigma_star_sq == base.sigma_star_sq * s * s


def test_sigma_star_dominated():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n, m = rng.integers(1, 5, 2)
        rows = [[Fraction(int(v), 8) for v in rng.integers(0, 9, m)] for _ in range(n)]
        if not any(any(r) for r in rows):
            continue
        prm = compute_params(VarianceProfile.from_entries("rectangular", rows))
        assert prm.sigma_star_sq <= min(prm.sigma1_sq, prm.sigma2_sq)


def test_float_only_profile_params_match_exact():
    rows = [[1, 2], [2, 1]]
    exact = VarianceProfile.from_entries("symmetric", rows)
    floaty = VarianceProfile(Kind.SYMMETRIC, 2, 2, np.array(rows, dtype=float))
    pe = compute_params(exact)
    pf = compute_params(floaty)
    assert float(pe.sigma_sq) == pf.sigma_sq
    assert float(pe.sigma_tilde_sq) == pf.sigma_tilde_sq


def test_transpose_swaps_sides():
    prof = VarianceProfile.from_entries("rectangular", [[1, 0, 2]])
    tp = prof.transpose()
    a, b = compute_params(prof), compute_params(tp)
    assert (a.sigma1_sq, a.sigma2_sq) == (b.sigma2_sq, b.sigma1_sq)
