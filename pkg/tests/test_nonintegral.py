from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exceptional_primes.errors import IntegralJError
from exceptional_primes.nonintegral import bounds_c, ceil_log, denominator_profile, shortcut_set
from exceptional_primes.sieve import S0


@pytest.mark.parametrize("den, g", [(2**11, 1), (103**17, 17), (6, 1), (37, 1), (11**5, 5)])
def test_profile_g(den, g):
    assert denominator_profile(Fraction(1, den)).g == g


def test_profile_rejects_integral_j():
    with pytest.raises(IntegralJError):
        denominator_profile(512)


def test_shortcut_examples():
    S = shortcut_set(Fraction(-17 * 373**3, 2**17))
    assert S.primes == [2, 3, 5, 7, 11, 13, 17]
    assert S.reasons[17].kind == "s0_pair"
    S = shortcut_set(Fraction(5, 103**17))
    assert S.reasons[17].kind == "divides_g" and S.reasons[17].g == 17
    assert shortcut_set(Fraction(110592, 37)).primes == [2, 3, 5, 7, 11, 13]


def test_shortcut_contains_s0():
    for ell, j in S0:
        if j.denominator > 1:
            assert ell in shortcut_set(j)


@given(st.integers(-10**12, 10**12).filter(bool), st.integers(2, 10**9))
def test_shortcut_small_g_means_no_large_primes(n, den):
    j = Fraction(n, den)
    if j.denominator == 1:
        return
    prof = denominator_profile(j)
    S = shortcut_set(j)
    if prof.g <= 13:
        assert {ell for ell in S.primes if ell > 13} <= {ell for ell, jj in S0 if jj == j}
    for ell in S.primes:
        if ell > 13 and S.reasons[ell].kind == "divides_g":
            assert prof.g % ell == 0
            assert all(e % ell == 0 and (p * p - 1) % ell == 0 for p, e in prof.factorization)


def test_bounds_c_examples():
    b = bounds_c(Fraction(1, 2**11))
    assert (b.bound_g, b.bound_p, b.p) == (17, 17, 2)
    assert bounds_c(Fraction(1, 103**17)).bound_p == 52
    assert bounds_c(Fraction(1, 2**17)).bound_logd == 17


@given(st.integers(1, 10**40))
def test_ceil_log(d):
    n = ceil_log(d)
    assert n >= 0
    # compare with float only away from integer boundaries
    x = math.log(d)
    if abs(x - round(x)) > 1e-9:
        assert n == math.ceil(x)


def test_ceil_log_small():
    assert [ceil_log(d) for d in (1, 2, 3, 7, 8, 20, 21)] == [0, 1, 2, 2, 3, 3, 4]
