"""Exceptional-prime bounds read off the denominator of a non-integral j.

If l > 13 is exceptional and (l, j) is not in S0, every prime p_i dividing
the denominator satisfies p_i = ±1 (mod l) and l divides every exponent
e_i. So l divides g = gcd(p_i^2 - 1, e_i), which needs no point counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import IntegralJError
from .numtheory import RationalLike, as_rational, factorize, prime_divisors
from .sieve import ExceptionalSet, Reason


@dataclass(frozen=True)
class DenominatorProfile:
    denominator: int
    factorization: tuple[tuple[int, int], ...]
    g: int

    @property
    def s(self) -> int:
        return len(self.factorization)


def _require_nonintegral(j: Fraction) -> None:
    if j.denominator == 1:
        raise IntegralJError(f"j = {j} is an integer")


def denominator_profile(j: RationalLike) -> DenominatorProfile:
    j = as_rational(j)
    _require_nonintegral(j)
    fac = tuple(factorize(j.denominator))
    g = 0
    for p, e in fac:
        g = math.gcd(g, p * p - 1, e)
    return DenominatorProfile(j.denominator, fac, g)


def shortcut_set(j: RationalLike) -> ExceptionalSet:
    """{l <= 13} ∪ {l : (l, j) in S0} ∪ {l : l | g}."""
    j = as_rational(j)
    prof = denominator_profile(j)
    S = ExceptionalSet.with_base(j)
    for ell in prime_divisors(prof.g):
        S.add(ell, Reason("divides_g", g=prof.g))
    return S


def ceil_log(d: int) -> int:
    """Least integer n with e^n >= d, for d >= 1."""
    if d <= 1:
        return 0
    digits = len(str(d))
    with localcontext() as ctx:
        ctx.prec = digits + 30
        x = Decimal(d).ln()
    n = math.ceil(x)
    # ln d is irrational for d > 1, so the only risk is rounding at a boundary.
    with localcontext() as ctx:
        ctx.prec = digits + 30
        while Decimal(n - 1).exp() >= d:
            n -= 1
        while Decimal(n).exp() < d:
            n += 1
    return n


@dataclass(frozen=True)
class CBounds:
    bound_g: int
    bound_p: int
    bound_logd: int
    #: the prime of the denominator achieving bound_p
    p: int


def bounds_c(j: RationalLike) -> CBounds:
    """Upper bounds for c(E) from g, from a prime of the denominator, and from log d."""
    prof = denominator_profile(j)
    p = min(q for q, _ in prof.factorization)
    return CBounds(
        bound_g=max(17, prof.g),
        bound_p=max(17, -(-(p + 1) // 2)),
        bound_logd=max(17, ceil_log(prof.denominator)),
        p=p,
    )
