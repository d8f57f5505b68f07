from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from exceptional_primes.curves import (
    CM_J_INVARIANTS,
    I0,
    I0_STAR,
    KodairaSymbol,
    Reduction,
    WeierstrassModel,
    ap,
    ap_good,
    compute_invariants,
    conductor,
    curve_from_j,
    is_cm_j,
    local_data,
    minimal_model,
    quadratic_twist,
    tate_local_data,
)
from exceptional_primes.errors import BoundExceededError, CMCurveError, SingularCurveError
from exceptional_primes.numtheory import factorize, valuation

import oracle

small = st.integers(-12, 12)
models = st.tuples(st.integers(0, 1), st.integers(-1, 1), st.integers(0, 1), small, small)


def nonsingular(a):
    try:
        return WeierstrassModel(*a)
    except SingularCurveError:
        return None


def test_invariant_examples():
    E = compute_invariants([0, 0, 0, 0, 1])
    assert (E.b2, E.b4, E.b6) == (0, 0, 4)
    assert (E.c4, E.c6, E.discriminant, E.j) == (0, -864, -432, 0)
    E = compute_invariants([0, 0, 0, 1, 0])
    assert (E.c4, E.discriminant, E.j) == (-48, -64, 1728)
    with pytest.raises(SingularCurveError):
        WeierstrassModel(0, -1, 0, 0, 0)


@settings(max_examples=1000, deadline=None)
@given(st.tuples(*[st.integers(-30, 30)] * 5))
def test_invariant_identities(a):
    E = nonsingular(a)
    assume(E is not None)
    assert 1728 * E.discriminant == E.c4**3 - E.c6**2
    assert 4 * E.b8 == E.b2 * E.b6 - E.b4**2
    c4, c6, disc = oracle.c4c6disc(a)
    assert (E.c4, E.c6, E.discriminant) == (c4, c6, disc)


def test_cm_table():
    assert len(CM_J_INVARIANTS) == 13
    assert is_cm_j(0) and is_cm_j(1728) and not is_cm_j(512)
    assert CM_J_INVARIANTS == {Fraction(j) for j in oracle.CM_J}


def test_minimal_model_examples():
    E = minimal_model(WeierstrassModel(0, 0, 0, 0, 6**6))
    assert E.ainvs == (0, 0, 0, 0, 1)
    E = minimal_model(WeierstrassModel(0, 0, 0, 2**6, 2**6))
    assert E.j == WeierstrassModel(0, 0, 0, 64, 64).j
    assert valuation(E.discriminant, 2) < valuation(WeierstrassModel(0, 0, 0, 64, 64).discriminant, 2)
    # brute-force 2-minimalization agrees on the valuation
    brute = oracle.local_minimal((0, 0, 0, 64, 64), 2)
    assert valuation(E.discriminant, 2) == valuation(oracle.c4c6disc(brute)[2], 2)


@settings(max_examples=150, deadline=None)
@given(models, st.sampled_from([1, 2, 3, 6, 10]), st.integers(-3, 3), st.integers(-2, 2), st.integers(-3, 3))
def test_minimal_model_properties(a, u, r, s, t):
    E = nonsingular(a)
    assume(E is not None)
    big = E.change_coordinates(u=Fraction(1, u), r=r, s=s, t=t)
    m = minimal_model(big)
    assert m.j == E.j
    assert m.is_integral()
    assert m.a1 in (0, 1) and m.a3 in (0, 1) and m.a2 in (-1, 0, 1)
    assert minimal_model(m) == m
    assert abs(m.discriminant) <= abs(minimal_model(E).discriminant)
    assert abs(m.discriminant) == abs(minimal_model(E).discriminant)
    for p in (2, 3):
        brute = oracle.local_minimal(tuple(int(x) for x in E.ainvs), p)
        assert valuation(m.discriminant, p) == valuation(oracle.c4c6disc(brute)[2], p)


def test_twist_examples():
    E = WeierstrassModel(0, 0, 0, 1, 1)
    assert quadratic_twist(E, 1) == E
    assert quadratic_twist(WeierstrassModel(0, 0, 0, 1, 0), 2) == WeierstrassModel(0, 0, 0, 4, 0)


@settings(max_examples=100, deadline=None)
@given(models, st.sampled_from([-1, 2, -2, 3, -3, 5, -15]))
def test_twist_properties(a, d):
    E = nonsingular(a)
    assume(E is not None and not is_cm_j(E.j))
    Ed = quadratic_twist(E, d)
    assert Ed.j == E.j
    back = minimal_model(quadratic_twist(Ed, d))
    assert back.j == E.j
    assert back.discriminant == minimal_model(E).discriminant
    N, fac = conductor(E)
    Nd, facd = conductor(Ed)
    changed = {p for p in {q for q, _ in fac} | {q for q, _ in facd}
               if dict(fac).get(p, 0) != dict(facd).get(p, 0)}
    assert all((2 * d) % p == 0 for p in changed)


@pytest.mark.parametrize("ainvs, N, types", [
    ((0, -1, 1, -10, -20), 11, {11: "I5"}),
    ((0, -1, 1, 0, 0), 11, {11: "I1"}),
    ((0, 0, 1, -1, 0), 37, {37: "I1"}),
    ((0, 1, 1, -23, -50), 37, {37: "I3"}),
    ((1, 0, 1, 4, -6), 14, {2: "I6", 7: "I3"}),
    ((1, 1, 1, -10, -10), 15, {3: "I4", 5: "I4"}),
    ((0, 1, 1, -2, 0), 389, {389: "I1"}),
    ((0, 0, 1, -7, 6), 5077, {5077: "I1"}),
    ((0, 0, 0, 1, 1), 496, {2: "II", 31: "I1"}),
    ((0, 0, 0, 0, 1), 36, {}),
    ((0, 0, 0, -4, 0), 64, {}),
    ((1, -1, 0, -2, -1), 49, {}),
    ((0, 1, 0, 1, 1), 128, {}),
])
def test_conductor_and_kodaira(ainvs, N, types):
    E = WeierstrassModel(*ainvs)
    assert conductor(E)[0] == N
    for p, kod in types.items():
        assert str(tate_local_data(minimal_model(E), p).kodaira) == kod


def test_local_data_examples():
    E = WeierstrassModel(0, 0, 0, 1, 1)
    ld = local_data(E, 7)
    assert ld.kodaira == I0 and ld.conductor_exponent == 0
    ld = tate_local_data(E, 31)
    assert ld.kodaira == KodairaSymbol("I", 1) and ld.conductor_exponent == 1
    assert ld.reduction in (Reduction.SPLIT, Reduction.NONSPLIT)
    ld = tate_local_data(E, 2)
    assert ld.reduction is Reduction.ADDITIVE and ld.conductor_exponent >= 2
    assert str(I0_STAR) == "I0*"


def test_twist_by_p_gives_i0_star():
    E = WeierstrassModel(0, -1, 1, -10, -20)
    for p in (3, 5, 7):
        assert tate_local_data(minimal_model(quadratic_twist(E, p)), p).kodaira == I0_STAR


@pytest.mark.parametrize("ainvs, p, a", [
    ((0, 0, 0, 1, 1), 5, -3),
    ((0, 0, 0, 1, 0), 3, 0),
    ((0, -1, 1, -10, -20), 2, -2),
    ((0, -1, 1, -10, -20), 3, -1),
    ((0, -1, 1, -10, -20), 5, 1),
    ((0, -1, 1, -10, -20), 7, -2),
    ((0, -1, 1, -10, -20), 13, 4),
    ((0, 0, 1, -1, 0), 2, -2),
    ((0, 0, 1, -1, 0), 3, -3),
    ((0, 0, 1, -1, 0), 11, -5),
])
def test_ap_examples(ainvs, p, a):
    assert ap_good(WeierstrassModel(*ainvs), p) == a


def test_ap_bad_prime_conventions():
    assert ap(WeierstrassModel(0, -1, 1, -10, -20), 11) == 1
    assert ap(WeierstrassModel(0, 0, 0, 1, 1), 2) == 0
    with pytest.raises(ValueError):
        ap_good(WeierstrassModel(0, -1, 1, -10, -20), 11)
    with pytest.raises(BoundExceededError):
        ap_good(WeierstrassModel(0, 0, 1, -1, 0), 101, counting_bound=100)


def test_ap_good_on_non_minimal_model():
    # scaled by u = 1/5: p = 5 divides the model's Δ but not Δmin
    E = WeierstrassModel(0, 0, 1, -1, 0)
    big = E.change_coordinates(u=Fraction(1, 5))
    assert ap_good(big, 5) == ap_good(E, 5)


@settings(max_examples=60, deadline=None)
@given(models)
def test_point_count_against_double_loop(a):
    E = nonsingular(a)
    assume(E is not None)
    m = minimal_model(E)
    ai = tuple(int(x) for x in m.ainvs)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if int(m.discriminant) % p == 0:
            continue
        t = ap_good(m, p)
        assert t == p + 1 - oracle.count_points(ai, p)
        assert t * t <= 4 * p


@settings(max_examples=100, deadline=None)
@given(models)
def test_tate_properties(a):
    E = nonsingular(a)
    assume(E is not None)
    m = minimal_model(E)
    for p, _ in factorize(abs(int(m.discriminant))):
        ld = tate_local_data(m, p)
        assert (ld.kodaira == I0) == (valuation(m.discriminant, p) == 0)
        assert ld.disc_valuation == valuation(m.discriminant, p)
        cap = 2 if p >= 5 else 5 if p == 3 else 8
        assert ld.conductor_exponent <= cap
        if ld.reduction in (Reduction.SPLIT, Reduction.NONSPLIT):
            assert ld.conductor_exponent == 1
            assert ld.kodaira == KodairaSymbol("I", ld.disc_valuation)


def test_curve_from_j():
    for j in (512, -9317, Fraction(-17 * 373**3, 2**17), Fraction(110592, 37)):
        E = curve_from_j(j)
        assert E.j == j
        assert E.is_integral()
    with pytest.raises(CMCurveError):
        curve_from_j(0)
    with pytest.raises(CMCurveError):
        curve_from_j(1728)


def test_good_everywhere_impossible(corpus_models):
    assert all(conductor(E)[0] > 1 for _, E in corpus_models)
