"""Weierstrass models over Q.

Invariants, global minimal models, quadratic twists, Tate's algorithm,
point counting over prime fields and the small amount of CM bookkeeping the
rest of the package needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import BoundExceededError, CMCurveError, SingularCurveError
from .numtheory import (
    RationalLike,
    as_rational,
    factorize,
    legendre,
    valuation,
)

DEFAULT_COUNTING_BOUND = 1_000_000

#: The thirteen rational j-invariants of CM elliptic curves.
CM_J_INVARIANTS = frozenset(
    Fraction(j)
    for j in (
        0,
        1728,
        -3375,
        8000,
        54000,
        287496,
        -32768,
        16581375,
        -884736,
        -12288000,
        -884736000,
        -147197952000,
        -262537412640768000,
    )
)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.discriminant == 0:
            raise SingularCurveError(f"singular Weierstrass equation {self.ainvs}")

    @classmethod
    def from_ainvs(cls, ainvs: Sequence[RationalLike]) -> "WeierstrassModel":
        if len(ainvs) == 2:
            ainvs = (0, 0, 0, ainvs[0], ainvs[1])
        if len(ainvs) != 5:
            raise ValueError("expected [a4, a6] or [a1, a2, a3, a4, a6]")
        return cls(*ainvs)

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b2(self) -> Fraction:
        return self.a1**2 + 4 * self.a2

    @cached_property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self) -> Fraction:
        return self.a3**2 + 4 * self.a6

    @cached_property
    def b8(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @cached_property
    def c4(self) -> Fraction:
        return self.b2**2 - 24 * self.b4

    @cached_property
    def c6(self) -> Fraction:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2 * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @cached_property
    def j(self) -> Fraction:
        return self.c4**3 / self.discriminant

    def invariants(self) -> dict[str, Fraction]:
        return {
            "b2": self.b2, "b4": self.b4, "b6": self.b6, "b8": self.b8,
            "c4": self.c4, "c6": self.c6, "discriminant": self.discriminant, "j": self.j,
        }

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    def int_ainvs(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"model {self} is not integral")
        return tuple(int(a) for a in self.ainvs)

    def change_coordinates(self, u: RationalLike = 1, r: RationalLike = 0,
                           s: RationalLike = 0, t: RationalLike = 0) -> "WeierstrassModel":
        """Apply x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        u, r, s, t = (as_rational(v) for v in (u, r, s, t))
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassModel(
            (a1 + 2 * s) / u,
            (a2 - s * a1 + 3 * r - s * s) / u**2,
            (a3 + r * a1 + 2 * t) / u**3,
            (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
            (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
        )

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def compute_invariants(model: WeierstrassModel | Sequence[RationalLike]) -> WeierstrassModel:
    """Model with every derived invariant populated; raises on Δ = 0."""
    if not isinstance(model, WeierstrassModel):
        model = WeierstrassModel.from_ainvs(model)
    for name in ("b2", "b4", "b6", "b8", "c4", "c6", "discriminant", "j"):
        getattr(model, name)
    return model


def is_cm_j(j: RationalLike) -> bool:
    return as_rational(j) in CM_J_INVARIANTS


def require_non_cm(j: RationalLike) -> None:
    if is_cm_j(j):
        raise CMCurveError(as_rational(j))


# -- minimal models ----------------------------------------------------------


def integral_model(model: WeierstrassModel) -> WeierstrassModel:
    """An isomorphic model with integer coefficients (u = 1/k scaling)."""
    k = 1
    for i, a in zip((1, 2, 3, 4, 6), model.ainvs):
        den = a.denominator
        for p, e in factorize(den):
            need = -(-e // i)
            have = valuation(k, p)
            if have < need:
                k *= p ** (need - have)
    return model if k == 1 else model.change_coordinates(u=Fraction(1, k))


def _kraus_ok(c4: int, c6: int, p: int) -> bool:
    # Local conditions for (c4, c6) to come from a model integral at p.
    if p == 3:
        return valuation(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        return c4 % 16 == 0 and c6 % 32 in (0, 8)
    return True


def model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """Reduced integral model with the given c4, c6 (a1, a3 in {0,1}, a2 in {-1,0,1})."""
    b2 = -c6 % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise ValueError(f"no integral model with c4={c4}, c6={c6}")
    a1 = b2 % 2
    a3 = b6 % 2
    a2 = (b2 - a1) // 4
    a4 = (b4 - a1 * a3) // 2
    a6 = (b6 - a3) // 4
    return WeierstrassModel(a1, a2, a3, a4, a6)


def minimal_model(model: WeierstrassModel) -> WeierstrassModel:
    """Global minimal model over Q, in reduced form.

    Uses Kraus's characterisation of the (c4, c6) pairs of integral models:
    divide out the largest p^d allowed at each prime of gcd(c6^2, Δ).
    """
    m = integral_model(model)
    c4, c6 = int(m.c4), int(m.c6)
    disc = int(m.discriminant)
    g = math.gcd(c6 * c6, disc)
    u = 1
    for p, e in factorize(g):
        d = e // 12
        while d > 0:
            c4p, c6p = c4 // p ** (4 * d), c6 // p ** (6 * d)
            if _kraus_ok(c4p, c6p, p):
                break
            d -= 1
        u *= p**d
    return model_from_c4c6(c4 // u**4, c6 // u**6)


def quadratic_twist(model: WeierstrassModel, d: int) -> WeierstrassModel:
    """Twist by the squarefree integer d (not minimalised)."""
    if d == 0:
        raise ValueError("twist parameter must be non-zero")
    if model.a1 == 0 and model.a3 == 0:
        return WeierstrassModel(0, d * model.a2, 0, d * d * model.a4, d**3 * model.a6)
    # (4x, 8(2y + a1 x + a3)) gives y^2 = x^3 + b2 x^2 + 8 b4 x + 16 b6.
    return WeierstrassModel(0, d * model.b2, 0, 8 * d * d * model.b4, 16 * d**3 * model.b6)


def curve_from_j(j: RationalLike) -> WeierstrassModel:
    """Minimal model of some curve with j-invariant ``j`` (j not 0 or 1728)."""
    j = as_rational(j)
    if j in (0, 1728):
        raise CMCurveError(j)
    k = j * (1728 - j)
    return minimal_model(WeierstrassModel(0, 0, 0, 3 * k, 2 * k * (1728 - j)))


# -- Tate's algorithm --------------------------------------------------------


class Reduction(str, Enum):
    GOOD = "good"
    SPLIT = "split multiplicative"
    NONSPLIT = "nonsplit multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class KodairaSymbol:
    """Kodaira type; ``kind`` is one of I, I*, II, III, IV, IV*, III*, II*."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("I", "I*", "II", "III", "IV", "IV*", "III*", "II*"):
            raise ValueError(f"unknown Kodaira type {self.kind}")
        if self.kind not in ("I", "I*") and self.n:
            raise ValueError(f"{self.kind} takes no index")

    def __str__(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind


I0 = KodairaSymbol("I", 0)
I0_STAR = KodairaSymbol("I*", 0)


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: KodairaSymbol
    disc_valuation: int
    conductor_exponent: int
    reduction: Reduction
    #: integral model, minimal at p, reached by the algorithm
    local_model: WeierstrassModel

    @property
    def ap(self) -> int | None:
        """Bad-prime convention for a_p; ``None`` at good primes."""
        return {Reduction.ADDITIVE: 0, Reduction.SPLIT: 1, Reduction.NONSPLIT: -1}.get(self.reduction)


def _v(x: int, p: int) -> int | float:
    return valuation(x, p) if x else math.inf


def _has_root_mod(a: int, b: int, c: int, p: int) -> bool:
    """Whether a x^2 + b x + c has a root in F_p."""
    a, b, c = a % p, b % p, c % p
    if p == 2:
        return c == 0 or (a + b + c) % 2 == 0
    if a == 0:
        return b != 0 or c == 0
    return legendre(b * b - 4 * a * c, p) >= 0


def _div(x: int, m: int) -> int:
    q, r = divmod(x, m)
    assert r == 0, (x, m)
    return q


def tate_local_data(model: WeierstrassModel, p: int) -> LocalData:
    """Kodaira symbol, conductor exponent and reduction type at p.

    The input is first made integral; non-minimality at p is removed inside
    the loop. Works for every prime including 2 and 3.
    """
    E = integral_model(model)
    a1, a2, a3, a4, a6 = E.int_ainvs()

    def pinv(x: int) -> int:
        return pow(x, -1, p)

    def rst(r=0, s=0, t=0):
        nonlocal a1, a2, a3, a4, a6
        a1, a2, a3, a4, a6 = (
            a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
        )

    def done(kod: KodairaSymbol, vD: int, f: int, red: Reduction) -> LocalData:
        return LocalData(p, kod, vD, f, red, WeierstrassModel(a1, a2, a3, a4, a6))

    while True:
        C = WeierstrassModel(a1, a2, a3, a4, a6)
        b2, b4, b6 = int(C.b2), int(C.b4), int(C.b6)
        c4, c6 = int(C.c4), int(C.c6)
        vD = _v(int(C.discriminant), p)
        if vD == 0:
            return done(I0, 0, 0, Reduction.GOOD)

        # Move the singular point of the reduction to (0, 0).
        if p == 2:
            if b2 % 2 == 0:
                r = a4 % 2
                t = (((r + a2) * r + a4) * r + a6) % 2
            else:
                r = a3 % 2
                t = (a4 + r * r) % 2
        elif p == 3:
            r = -b6 % 3 if b2 % 3 == 0 else (-pinv(b2) * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if c4 % p == 0:
                r = (-pinv(12) * b2) % p
            else:
                r = (-pinv(12 * c4) * (c6 + b2 * c4)) % p
            t = (-pinv(2) * (a1 * r + a3)) % p
        rst(r=r, t=t)

        if c4 % p:
            split = _has_root_mod(1, a1, -a2, p)
            return done(KodairaSymbol("I", vD), vD, 1, Reduction.SPLIT if split else Reduction.NONSPLIT)
        if _v(a6, p) < 2:
            return done(KodairaSymbol("II"), vD, vD, Reduction.ADDITIVE)
        C = WeierstrassModel(a1, a2, a3, a4, a6)
        if _v(int(C.b8), p) < 3:
            return done(KodairaSymbol("III"), vD, vD - 1, Reduction.ADDITIVE)
        if _v(int(C.b6), p) < 3:
            return done(KodairaSymbol("IV"), vD, vD - 2, Reduction.ADDITIVE)

        # Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        if p == 2:
            s = a2 % 2
            t = 2 * (_div(a6, 4) % 2)
        elif p == 3:
            s, t = a1, a3
        else:
            # Not reduced mod p: t must kill a3 modulo p^2, not just p.
            s = -a1 * pinv(2)
            t = -a3 * pinv(2)
        rst(s=s, t=t)

        b = _div(a2, p)
        c = _div(a4, p * p)
        d = _div(a6, p**3)
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if w % p:
            return done(I0_STAR, vD, vD - 4, Reduction.ADDITIVE)
        if x % p:
            # Double root of the cubic: type I_m*.
            if p == 2:
                r = c % 2
            elif p == 3:
                r = c * pinv(b)
            else:
                r = (b * c - 9 * d) * pinv(2 * x)
            rst(r=p * (r % p))
            ix = iy = 3
            mx = my = p * p
            while True:
                a2t = _div(a2, p)
                a3t = _div(a3, my)
                a4t = _div(a4, p * mx)
                a6t = _div(a6, mx * my)
                if (a3t * a3t + 4 * a6t) % p:
                    break
                if p == 2:
                    t = my * (a6t % 2)
                else:
                    t = my * ((-a3t * pinv(2)) % p)
                rst(t=t)
                my *= p
                iy += 1
                a2t = _div(a2, p)
                a3t = _div(a3, my)
                a4t = _div(a4, p * mx)
                a6t = _div(a6, mx * my)
                if (a4t * a4t - 4 * a6t * a2t) % p:
                    break
                if p == 2:
                    r = mx * ((a6t * pinv(a2t)) % 2)
                else:
                    r = mx * ((-a4t * pinv(2 * a2t)) % p)
                rst(r=r)
                mx *= p
                ix += 1
            m = ix + iy - 5
            return done(KodairaSymbol("I*", m), vD, vD - m - 4, Reduction.ADDITIVE)

        # Triple root.
        if p == 3:
            rp = -d
        elif p == 2:
            rp = c
        else:
            rp = -b * pinv(3)
        rst(r=p * (rp % p))
        a3t = _div(a3, p * p)
        a6t = _div(a6, p**4)
        if (a3t * a3t + 4 * a6t) % p:
            return done(KodairaSymbol("IV*"), vD, vD - 6, Reduction.ADDITIVE)
        if p == 2:
            t = -p * p * (a6t % 2)
        else:
            t = p * p * ((-a3t * pinv(2)) % p)
        rst(t=t)
        if _v(a4, p) < 4:
            return done(KodairaSymbol("III*"), vD, vD - 7, Reduction.ADDITIVE)
        if _v(a6, p) < 6:
            return done(KodairaSymbol("II*"), vD, vD - 8, Reduction.ADDITIVE)
        # Not minimal at p: scale down and start over.
        a1, a2, a3, a4, a6 = _div(a1, p), _div(a2, p**2), _div(a3, p**3), _div(a4, p**4), _div(a6, p**6)


def local_data(model: WeierstrassModel, p: int) -> LocalData:
    """Like :func:`tate_local_data` but skips the algorithm when p ∤ Δ."""
    if model.is_integral() and int(model.discriminant) % p:
        return LocalData(p, I0, 0, 0, Reduction.GOOD, model)
    return tate_local_data(model, p)


def conductor(model: WeierstrassModel, **kw) -> tuple[int, list[tuple[int, int]]]:
    """Conductor N and its factorization [(p, f_p)]."""
    Em = minimal_model(model)
    fac = []
    for p, _ in factorize(abs(int(Em.discriminant)), **kw):
        f = tate_local_data(Em, p).conductor_exponent
        if f:
            fac.append((p, f))
    return math.prod(p**f for p, f in fac), fac


# -- point counting ----------------------------------------------------------


def _count_points_mod_p(ainvs: Sequence[int], p: int) -> int:
    a1, a2, a3, a4, a6 = (a % p for a in ainvs)
    if p == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    n += 1
        return n
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    xs = np.arange(p, dtype=np.int64)
    f = (4 * xs + b2) % p
    f = (f * xs + 2 * b4) % p
    f = (f * xs + b6) % p
    chi = np.full(p, -1, dtype=np.int64)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return int(p + 1 + chi[f].sum())


def ap_good(model: WeierstrassModel, p: int, counting_bound: int = DEFAULT_COUNTING_BOUND) -> int:
    """Trace of Frobenius p + 1 - #E(F_p) at a prime of good reduction."""
    if p > counting_bound:
        raise BoundExceededError(f"p = {p} exceeds the point-counting bound {counting_bound}")
    E = integral_model(model)
    if int(E.discriminant) % p == 0:
        ld = tate_local_data(E, p)
        if ld.reduction is not Reduction.GOOD:
            raise ValueError(f"bad reduction at p = {p}")
        E = ld.local_model
    return p + 1 - _count_points_mod_p(E.int_ainvs(), p)


def ap(model: WeierstrassModel, p: int, counting_bound: int = DEFAULT_COUNTING_BOUND) -> int:
    """a_p with the 0 / +1 / -1 convention at additive / split / non-split primes."""
    ld = local_data(integral_model(model), p)
    if ld.reduction is Reduction.GOOD:
        return ap_good(ld.local_model, p, counting_bound)
    return ld.ap
