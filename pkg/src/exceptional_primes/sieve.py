"""Quadratic-residue sieve producing a finite superset of the exceptional primes.

For a non-CM curve E/Q: collect the primes q_j at which E can carry a
quadratic character of the relevant shape, stream odd primes p_i of type
I0 or I0* with non-zero trace a_i, and stop at the first row count r for
which the F2 system A_r x = b_r is inconsistent. Primes outside

    {l <= 13}  ∪  {l : (l, j) in S0}  ∪  {l : l | a_i for some i <= r}

have surjective mod-l representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .curves import (
    DEFAULT_COUNTING_BOUND,
    I0,
    I0_STAR,
    WeierstrassModel,
    ap_good,
    curve_from_j,
    local_data,
    minimal_model,
    quadratic_twist,
    require_non_cm,
)
from .errors import BoundExceededError
from .numtheory import (
    RationalLike,
    as_rational,
    f2_is_consistent,
    legendre,
    next_prime,
    prime_divisors,
    valuation,
)

BASE_PRIMES = (2, 3, 5, 7, 11, 13)
DEFAULT_SEARCH_CAP = 10_000

#: (l, j) pairs with a rational l-isogeny for l in {17, 37}.
S0 = frozenset({
    (17, Fraction(-(17**2) * 101**3, 2)),
    (17, Fraction(-17 * 373**3, 2**17)),
    (37, Fraction(-7 * 11**3)),
    (37, Fraction(-7 * 137**3 * 2083**3)),
})


def s0_lookup(ell: int, j: RationalLike) -> bool:
    return (ell, as_rational(j)) in S0


def s0_primes(j: RationalLike) -> list[int]:
    j = as_rational(j)
    return sorted(ell for ell, jj in S0 if jj == j)


# -- report types ------------------------------------------------------------


@dataclass(frozen=True)
class Reason:
    """Why a prime is in S.

    ``kind`` is ``base``, ``s0_pair``, ``divides_a_i`` (sieve) or
    ``divides_g`` (denominator shortcut).
    """

    kind: str
    i: int | None = None
    p_i: int | None = None
    a_i: int | None = None
    g: int | None = None

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "divides_a_i":
            out.update(i=self.i, p_i=self.p_i, a_i=self.a_i)
        elif self.kind == "divides_g":
            out["g"] = self.g
        return out


@dataclass
class ExceptionalSet:
    reasons: dict[int, Reason] = field(default_factory=dict)

    @property
    def primes(self) -> list[int]:
        return sorted(self.reasons)

    def add(self, ell: int, reason: Reason) -> None:
        # First recorded reason wins: base, then S0, then the rest.
        self.reasons.setdefault(ell, reason)

    def __contains__(self, ell: int) -> bool:
        return ell in self.reasons

    @classmethod
    def with_base(cls, j: Fraction) -> "ExceptionalSet":
        S = cls()
        for ell in BASE_PRIMES:
            S.add(ell, Reason("base"))
        for ell in s0_primes(j):
            S.add(ell, Reason("s0_pair"))
        return S


@dataclass(frozen=True)
class AdmissiblePrime:
    p: int
    twisted: bool
    a: int


@dataclass
class SieveRow:
    prime: AdmissiblePrime
    alpha: list[int]
    beta: int


@dataclass
class SieveState:
    qlist: list[int]
    rows: list[SieveRow] = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.qlist)

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def p_r(self) -> int | None:
        return self.rows[-1].prime.p if self.rows else None

    def matrix(self, m: int | None = None) -> tuple[list[list[int]], list[int]]:
        rows = self.rows if m is None else self.rows[:m]
        return [row.alpha for row in rows], [row.beta for row in rows]

    def is_consistent(self, m: int | None = None) -> bool:
        A, b = self.matrix(m)
        return f2_is_consistent(A, b, self.d)

    @property
    def accumulated_primes(self) -> set[int]:
        out: set[int] = set()
        for row in self.rows:
            out.update(ell for ell in prime_divisors(row.prime.a) if ell > 13)
        return out


# -- operations --------------------------------------------------------------


def compute_qlist(j: RationalLike, discriminant: RationalLike | None = None) -> list[int]:
    """Primes q with v_2(j) in {3,6,9} (q = 2) or v_q(j - 1728) odd and positive.

    Odd candidates are taken from gcd(num(j - 1728), num(Δ) den(Δ)) for the
    discriminant of any model with this j; every such q divides Δ.
    """
    j = as_rational(j)
    require_non_cm(j)
    if discriminant is None:
        discriminant = curve_from_j(j).discriminant
    D = as_rational(discriminant)
    jm = j - 1728
    g = gcd(jm.numerator, D.numerator * D.denominator)
    qs = [q for q in prime_divisors(g) if q != 2 and valuation(jm, q) % 2 == 1]
    if valuation(j, 2) in (3, 6, 9):
        qs.insert(0, 2)
    return qs


def admissible_at(model: WeierstrassModel, p: int,
                  counting_bound: int = DEFAULT_COUNTING_BOUND) -> AdmissiblePrime | None:
    """Row data for the odd prime p, or None when p is not admissible."""
    ld = local_data(model, p)
    if ld.kodaira == I0:
        a = ap_good(ld.local_model, p, counting_bound)
        twisted = False
    elif ld.kodaira == I0_STAR:
        a = ap_good(quadratic_twist(ld.local_model, p), p, counting_bound)
        twisted = True
    else:
        return None
    if a == 0:
        return None
    return AdmissiblePrime(p, twisted, abs(a))


def next_admissible(model: WeierstrassModel, after: int, *, cap: int = DEFAULT_SEARCH_CAP,
                    counting_bound: int = DEFAULT_COUNTING_BOUND) -> AdmissiblePrime:
    """Smallest odd prime p > after of type I0/I0* with a_p(E_p) != 0."""
    p = max(after, 2)
    while True:
        p = next_prime(p)
        if p > cap:
            raise BoundExceededError(f"no admissible prime in ({after}, {cap}]")
        adm = admissible_at(model, p, counting_bound)
        if adm is not None:
            return adm


def sieve_row(qlist: list[int], adm: AdmissiblePrime) -> SieveRow:
    p = adm.p
    alpha = [0 if legendre(q, p) == 1 else 1 for q in qlist]
    beta = 0 if legendre(-1, p) == 1 else 1
    return SieveRow(adm, alpha, beta)


def run_sieve(model: WeierstrassModel, *, cap: int = DEFAULT_SEARCH_CAP,
              counting_bound: int = DEFAULT_COUNTING_BOUND) -> tuple[ExceptionalSet, SieveState]:
    E = minimal_model(model)
    j = E.j
    require_non_cm(j)
    state = SieveState(compute_qlist(j, E.discriminant))
    S = ExceptionalSet.with_base(j)
    p = 2
    while True:
        adm = next_admissible(E, p, cap=cap, counting_bound=counting_bound)
        p = adm.p
        state.rows.append(sieve_row(state.qlist, adm))
        i = state.r
        for ell in prime_divisors(adm.a):
            if ell > 13:
                S.add(ell, Reason("divides_a_i", i=i, p_i=adm.p, a_i=adm.a))
        if not state.is_consistent():
            return S, state

