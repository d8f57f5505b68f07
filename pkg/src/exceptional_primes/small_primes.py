"""Per-prime surjectivity decisions for the primes left in S.

* l in {2, 3, 5, 7}: j lies on one of the listed rational families
  iff the mod-l image is not GL2.
* l = 11: explicit j-values, an integrality criterion, the shape of the
  denominator, and a bounded search of rational points on X_ns+(11).
* l = 13 and l > 13: Frobenius witnesses, i.e. primes p whose trace a_p
  rules out every proper maximal subgroup that could contain the image.
* 2-adic and 3-adic refinements.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .curves import DEFAULT_COUNTING_BOUND, WeierstrassModel, ap_good, conductor, minimal_model
from .errors import ResourceLimitError
from .numtheory import Poly, RationalLike, as_rational, factorize, legendre, next_prime, rational_roots
from .sieve import s0_lookup

DEFAULT_WITNESS_BOUND = 10_000
DEFAULT_XNS11_BOUND = 30


class Status(str, Enum):
    SURJECTIVE = "surjective"
    NON_SURJECTIVE = "non_surjective"
    UNDETERMINED = "undetermined"


@dataclass
class PrimeStatus:
    ell: int
    status: Status
    certificate: Optional[dict] = None

    def __post_init__(self):
        if self.status is not Status.UNDETERMINED and not self.certificate:
            raise ValueError(f"{self.status.value} status for l = {self.ell} needs a certificate")

    def as_dict(self) -> dict:
        return {"prime": self.ell, "status": self.status.value, "certificate": self.certificate}


# -- rational families -------------------------------------------------------


@dataclass(frozen=True)
class RationalFamily:
    """j = numerator(t) / denominator(t) for t in Q."""

    label: str
    numerator: Poly
    denominator: Poly

    def __call__(self, t: RationalLike) -> Fraction | None:
        den = self.denominator(t)
        if den == 0:
            return None
        return self.numerator(t) / den


_t = Poly.x()
_one = Poly([1])


def _family(label: str, num: Poly, den: Poly = _one) -> RationalFamily:
    return RationalFamily(label, num, den)


FAMILIES: dict[int, list[RationalFamily]] = {
    2: [
        _family("2B", 256 * (_t + 1) ** 3, _t),
        _family("2Cn", _t**2 + 1728),
    ],
    3: [
        _family("3B", 27 * (_t + 1) * (_t + 9) ** 3, _t**3),
        _family("3Nn", _t**3),
    ],
    5: [
        _family(
            "5S4",
            125 * (_t + 1) * (2 * _t + 1) ** 3 * (2 * _t**2 - 3 * _t + 3) ** 3,
            (_t**2 + _t - 1) ** 5,
        ),
        _family("5B", 25 * (_t**2 + 10 * _t + 5) ** 3, _t**5),
        _family("5Nn", _t**3 * (_t**2 + 5 * _t + 40)),
    ],
    7: [
        _family(
            "7Ns",
            _t * (_t + 1) ** 3 * (_t**2 - 5 * _t + 1) ** 3 * (_t**2 - 5 * _t + 8) ** 3
            * (_t**4 - 5 * _t**3 + 8 * _t**2 - 7 * _t + 7) ** 3,
            (_t**3 - 4 * _t**2 + 3 * _t + 1) ** 7,
        ),
        _family(
            "7Nn",
            64 * _t**3 * (_t**2 + 7) ** 3 * (_t**2 - 7 * _t + 14) ** 3 * (5 * _t**2 - 14 * _t - 7) ** 3,
            (_t**3 - 7 * _t**2 + 7 * _t + 7) ** 7,
        ),
        _family(
            "7B",
            (_t**2 + 245 * _t + 2401) ** 3 * (_t**2 + 13 * _t + 49),
            _t**7,
        ),
    ],
    13: [
        _family(
            "13S4",
            (_t**2 + 5 * _t + 13) * (_t**4 + 7 * _t**3 + 20 * _t**2 + 19 * _t + 1) ** 3,
            _t,
        ),
    ],
}

LADIC_FAMILIES: dict[int, list[RationalFamily]] = {
    2: [
        _family("2adic-a", -4 * _t**3 * (_t + 8)),
        _family("2adic-b", -(_t**2) + 1728),
        _family("2adic-c", 2 * _t**2 + 1728),
        _family("2adic-d", -2 * _t**2 + 1728),
    ],
    3: [
        _family(
            "3adic",
            -(3**7) * (_t**2 - 1) ** 3 * (_t**6 + 3 * _t**5 + 6 * _t**4 + _t**3 - 3 * _t**2 + 12 * _t + 16) ** 3
            * (2 * _t**3 + 3 * _t**2 - 3 * _t - 5),
            (_t**3 - 3 * _t - 1) ** 9,
        ),
    ],
}

EXCEPTIONAL_J_11 = frozenset({Fraction(-(11**2)), Fraction(-11 * 131**3)})
EXCEPTIONAL_J_13 = frozenset({
    Fraction(2**4 * 5 * 13**4 * 17**3, 3**13),
    Fraction(-(2**12) * 5**3 * 11 * 13**4, 3**13),
    Fraction(2**18 * 3**3 * 13**4 * 127**3 * 139**3 * 157**3 * 283**3 * 929, 5**13 * 61**13),
})


def family_member(j: RationalLike, fam: RationalFamily) -> Fraction | None:
    """Some t in Q with fam(t) = j, or None. Raises ResourceLimitError."""
    j = as_rational(j)
    f = fam.numerator - j * fam.denominator
    if f.is_zero():
        raise ValueError(f"family {fam.label} is constant")
    for t in rational_roots(f):
        if fam(t) == j:
            return t
    return None


def _family_status(j: Fraction, ell: int, families: Sequence[RationalFamily]) -> PrimeStatus:
    try:
        for fam in families:
            t = family_member(j, fam)
            if t is not None:
                return PrimeStatus(ell, Status.NON_SURJECTIVE,
                                   {"kind": "family", "family": fam.label, "t": str(t)})
    except ResourceLimitError as exc:
        return PrimeStatus(ell, Status.UNDETERMINED, {"kind": "resource_limit", "detail": str(exc)})
    return PrimeStatus(ell, Status.SURJECTIVE,
                       {"kind": "no_family_point", "families": [f.label for f in families]})


def check_mod_small(j: RationalLike, ell: int) -> PrimeStatus:
    if ell not in (2, 3, 5, 7):
        raise ValueError(f"check_mod_small handles l in {{2,3,5,7}}, got {ell}")
    return _family_status(as_rational(j), ell, FAMILIES[ell])


# -- X_ns+(11) ---------------------------------------------------------------

XNS11_AINVS = (Fraction(0), Fraction(-1), Fraction(1), Fraction(-7), Fraction(10))
XNS11_GENERATOR = (Fraction(4), Fraction(5))

Point = Optional[tuple[Fraction, Fraction]]  # None is the point at infinity


def on_curve(ainvs: Sequence[Fraction], P: Point) -> bool:
    if P is None:
        return True
    a1, a2, a3, a4, a6 = ainvs
    x, y = P
    return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6


def ec_neg(ainvs: Sequence[Fraction], P: Point) -> Point:
    if P is None:
        return None
    a1, _, a3, _, _ = ainvs
    x, y = P
    return (x, -y - a1 * x - a3)


def ec_add(ainvs: Sequence[Fraction], P: Point, Q: Point) -> Point:
    """Chord-and-tangent addition on a long Weierstrass model over Q."""
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = ainvs
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def ec_mul(ainvs: Sequence[Fraction], n: int, P: Point) -> Point:
    if n < 0:
        return ec_mul(ainvs, -n, ec_neg(ainvs, P))
    out: Point = None
    while n:
        if n & 1:
            out = ec_add(ainvs, out, P)
        P = ec_add(ainvs, P, P)
        n >>= 1
    return out


def xns11_add(P: Point, Q: Point) -> Point:
    return ec_add(XNS11_AINVS, P, Q)


def xns11_J(P: Point) -> Fraction | None:
    """The degree-12 map to the j-line; None stands for infinity."""
    if P is None:
        raise ValueError("J is not evaluated at the point at infinity")
    x, y = P
    f1 = x * x + 3 * x - 6
    f2 = 11 * (x * x - 5) * y + (2 * x**4 + 23 * x**3 - 72 * x * x - 28 * x + 127)
    f3 = 6 * y + 11 * x - 19
    f4 = 22 * (x - 2) * y + (5 * x**3 + 17 * x * x - 112 * x + 120)
    f5 = 11 * y + (2 * x * x + 17 * x - 34)
    f6 = (x - 4) * y - (5 * x - 9)
    den = f5**2 * f6**11
    if den == 0:
        return None
    return (f1 * f2 * f3 * f4) ** 3 / den


def xns11_multiples(bound: int):
    """Yield (n, nP) for n = ±1, ..., ±bound with P the generator (4, 5)."""
    P = XNS11_GENERATOR
    Q: Point = None
    for n in range(1, bound + 1):
        Q = xns11_add(Q, P)
        yield n, Q
        yield -n, ec_neg(XNS11_AINVS, Q)


def check_mod_11(j: RationalLike, search_bound: int = DEFAULT_XNS11_BOUND) -> PrimeStatus:
    j = as_rational(j)
    if j in EXCEPTIONAL_J_11:
        return PrimeStatus(11, Status.NON_SURJECTIVE, {"kind": "explicit_j", "j": str(j)})
    if j.denominator == 1:
        return PrimeStatus(11, Status.SURJECTIVE, {"kind": "integral_j"})
    try:
        fac = factorize(j.denominator)
    except ResourceLimitError as exc:
        return PrimeStatus(11, Status.UNDETERMINED, {"kind": "resource_limit", "detail": str(exc)})
    for p, e in fac:
        if p % 11 not in (1, 10) or e % 11:
            return PrimeStatus(11, Status.SURJECTIVE, {"kind": "denominator_shape", "p": p, "e": e})
    for n, Q in xns11_multiples(search_bound):
        if Q is not None and xns11_J(Q) == j:
            return PrimeStatus(11, Status.NON_SURJECTIVE, {"kind": "xns11_point", "n": n,
                                                           "x": str(Q[0]), "y": str(Q[1])})
    return PrimeStatus(11, Status.UNDETERMINED, {"kind": "xns11_search_exhausted", "bound": search_bound})


# -- Frobenius witnesses -----------------------------------------------------


class FrobeniusTraces:
    """Memoised a_p(E) at primes of good reduction, skipping p | N."""

    def __init__(self, model: WeierstrassModel, N: int | None = None,
                 counting_bound: int = DEFAULT_COUNTING_BOUND):
        self.model = minimal_model(model)
        self.N = conductor(self.model)[0] if N is None else N
        self.counting_bound = counting_bound
        self._cache: dict[int, int] = {}

    def __call__(self, p: int) -> int:
        if p not in self._cache:
            self._cache[p] = ap_good(self.model, p, self.counting_bound)
        return self._cache[p]

    def good_primes(self, bound: int, avoid: int = 1):
        """(p, a_p) for primes p <= bound with p ∤ N·avoid, increasing."""
        p = 1
        while True:
            p = next_prime(p)
            if p > bound:
                return
            if self.N % p == 0 or avoid % p == 0:
                continue
            yield p, self(p)


def _traces(model, traces: FrobeniusTraces | None) -> FrobeniusTraces:
    return traces if traces is not None else FrobeniusTraces(model)


def _is_root_x2_3x_1(u: int, ell: int) -> bool:
    return (u * u - 3 * u + 1) % ell == 0


def check_mod_13(model: WeierstrassModel, j: RationalLike | None = None,
                 witness_bound: int = DEFAULT_WITNESS_BOUND,
                 traces: FrobeniusTraces | None = None) -> PrimeStatus:
    """Non-surjective on the explicit list or family; surjective iff all three
    witness kinds turn up below ``witness_bound``; undetermined otherwise."""
    j = as_rational(model.j if j is None else j)
    if j in EXCEPTIONAL_J_13:
        return PrimeStatus(13, Status.NON_SURJECTIVE, {"kind": "explicit_j", "j": str(j)})
    fam_status = _family_status(j, 13, FAMILIES[13])
    if fam_status.status is Status.NON_SURJECTIVE:
        return fam_status
    tr = _traces(model, traces)
    found: dict[str, dict] = {}
    for p, a in tr.good_primes(witness_bound, avoid=13):
        if a % 13:
            disc = legendre(a * a - 4 * p, 13)
            if disc == 1:
                found.setdefault("nonzero_square", {"p": p, "a_p": a})
            elif disc == -1:
                found.setdefault("non_square", {"p": p, "a_p": a})
        u = a * a * pow(p, -1, 13) % 13
        if u not in (0, 1, 2, 4) and not _is_root_x2_3x_1(u, 13):
            found.setdefault("ratio", {"p": p, "a_p": a})
        if len(found) == 3:
            return PrimeStatus(13, Status.SURJECTIVE, {"kind": "witnesses", "witnesses": found})
    return PrimeStatus(13, Status.UNDETERMINED, {"kind": "witnesses_incomplete", "witnesses": found,
                                                 "bound": witness_bound})


def certify_large(model: WeierstrassModel, ell: int, witness_bound: int = DEFAULT_WITNESS_BOUND,
                  traces: FrobeniusTraces | None = None, j: RationalLike | None = None) -> PrimeStatus:
    """Surjectivity at l > 13 from a prime p ∤ N l with l ∤ a_p and a_p^2 - 4p a non-zero square."""
    if ell <= 13:
        raise ValueError("certify_large needs l > 13")
    j = as_rational(model.j if j is None else j)
    if s0_lookup(ell, j):
        return PrimeStatus(ell, Status.NON_SURJECTIVE, {"kind": "s0_pair", "j": str(j)})
    tr = _traces(model, traces)
    for p, a in tr.good_primes(witness_bound, avoid=ell):
        if a % ell and legendre(a * a - 4 * p, ell) == 1:
            return PrimeStatus(ell, Status.SURJECTIVE, {"kind": "witness", "p": p, "a_p": a})
    return PrimeStatus(ell, Status.UNDETERMINED, {"kind": "no_witness", "bound": witness_bound})


def check_ladic(j: RationalLike, ell: int, mod_status: PrimeStatus) -> PrimeStatus:
    """l-adic surjectivity given the mod-l answer."""
    j = as_rational(j)
    if ell >= 5 or mod_status.status is Status.NON_SURJECTIVE:
        return PrimeStatus(ell, mod_status.status, mod_status.certificate)
    extra = _family_status(j, ell, LADIC_FAMILIES[ell])
    if extra.status is Status.NON_SURJECTIVE:
        return extra
    if extra.status is Status.UNDETERMINED or mod_status.status is Status.UNDETERMINED:
        return PrimeStatus(ell, Status.UNDETERMINED, extra.certificate)
    return PrimeStatus(ell, Status.SURJECTIVE, {
        "kind": "no_family_point",
        "families": mod_status.certificate["families"] + extra.certificate["families"],
    })
