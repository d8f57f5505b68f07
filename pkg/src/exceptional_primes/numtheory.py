"""Exact integer and rational primitives.

Everything here works on Python ints and :class:`fractions.Fraction`; no
floating point enters any decision.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import ResourceLimitError

Rational = Fraction
RationalLike = Union[int, Fraction]
Factorization = list  # list[tuple[int, int]], primes ascending

#: Below this bound the Miller-Rabin test with the first 13 prime bases is
#: deterministic (Sorenson & Webster).
MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

TRIAL_DIVISION_BOUND = 10_000
DEFAULT_RHO_BUDGET = 2_000_000

_SMALL_PRIMES: list[int] = []


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, f in enumerate(flags) if f]


_SMALL_PRIMES = _sieve(TRIAL_DIVISION_BOUND)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


def as_rational(x: RationalLike | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Raises :class:`ResourceLimitError` for probable primes above
    ``MR_DETERMINISTIC_BOUND``, where the fixed-base test stops being a proof.
    """
    if n < 2:
        return False
    if n <= TRIAL_DIVISION_BOUND:
        return n in _SMALL_PRIME_SET
    for p in _SMALL_PRIMES[:50]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    if n >= MR_DETERMINISTIC_BOUND:
        raise ResourceLimitError(f"cannot certify primality of {n} (above deterministic bound)")
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    if n < 2:
        return 2
    c = n + 1
    if c > 2 and c % 2 == 0:
        c += 1
    while not is_prime(c):
        c += 2
    return c


def primes_from(start: int) -> Iterator[int]:
    """Primes ``p >= start`` in increasing order."""
    p = start - 1
    while True:
        p = next_prime(p)
        yield p


def _brent(n: int, rng: random.Random, budget: list[int]) -> int:
    # Returns a non-trivial factor of the odd composite n.
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            budget[0] -= r
            if budget[0] < 0:
                raise ResourceLimitError(f"factorization incomplete: cofactor {n} resisted rho")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, *, effort: int = DEFAULT_RHO_BUDGET, seed: int = 0) -> Factorization:
    """Factor a positive integer into ``[(p, e), ...]`` with ``p`` ascending.

    Trial division up to ``TRIAL_DIVISION_BOUND`` then Brent's variant of
    Pollard rho, seeded deterministically. ``effort`` caps the total number
    of rho iterations; exceeding it raises :class:`ResourceLimitError`.
    """
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    rng = random.Random(seed)
    budget = [effort]
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_DIVISION_BOUND**2 or is_prime(m):
            # Trial division already removed every prime below the bound,
            # so m below its square is prime.
            found[m] = found.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = _brent(m, rng, budget)
        stack += [f, m // f]
    return sorted(found.items())


def prime_divisors(n: int, **kw) -> list[int]:
    return [p for p, _ in factorize(abs(n), **kw)] if n else []


def divisors(fac: Factorization) -> list[int]:
    out = [1]
    for p, e in fac:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def valuation(x: RationalLike, p: int) -> int | float:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = as_rational(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


# -- F2 linear algebra -------------------------------------------------------


def _pack(row: Sequence[int]) -> int:
    return sum(1 << j for j, bit in enumerate(row) if bit & 1)


def f2_solve(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """Solve ``A x = b`` over F2.

    ``A`` is a list of rows of 0/1 entries. Returns one solution, or ``None``
    when the system is inconsistent.
    """
    if len(A) != len(b):
        raise ValueError("row count of A and length of b differ")
    d = ncols if ncols is not None else (len(A[0]) if A else 0)
    # Augmented rows: bit d holds the right-hand side.
    rows = [_pack(r) | ((b_i & 1) << d) for r, b_i in zip(A, b)]
    pivots: list[tuple[int, int]] = []
    rank = 0
    for col in range(d):
        bit = 1 << col
        piv = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
        pivots.append((rank, col))
        rank += 1
    rhs = 1 << d
    if any(r == rhs for r in rows[rank:]):
        return None
    x = [0] * d
    for i, col in pivots:
        x[col] = (rows[i] >> d) & 1
    return x


def f2_is_consistent(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> bool:
    return f2_solve(A, b, ncols) is not None


# -- polynomials over Q ------------------------------------------------------


class Poly:
    """Immutable univariate polynomial over Q; coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        c = [as_rational(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t: RationalLike) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @staticmethod
    def _lift(other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other) -> "Poly":
        o = self._lift(other).coeffs
        n = max(len(self.coeffs), len(o))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o + (Fraction(0),) * (n - len(o))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        o = self._lift(other).coeffs
        if not self.coeffs or not o:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        out, base = Poly([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def primitive_integer_coeffs(self) -> list[int]:
        """Coefficients scaled to coprime integers with the same roots."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        return [c // g for c in ints] if g > 1 else ints


DEFAULT_ROOT_BUDGET = 2_000_000


def _int_poly_vanishes(coeffs: Sequence[int], p: int, q: int) -> bool:
    # sum a_i p^i q^(n-i) == 0, evaluated by Horner on integers.
    acc = 0
    qpow = 1
    for a in reversed(coeffs):
        acc = acc * p + a * qpow
        qpow *= q
    return acc == 0


def rational_roots(f: Poly | Sequence[RationalLike], *, budget: int = DEFAULT_ROOT_BUDGET,
                   effort: int = DEFAULT_RHO_BUDGET) -> list[Fraction]:
    """Distinct rational roots of ``f`` in increasing order.

    Candidates ``p/q`` come from divisors of the constant and leading
    coefficients of the primitive integer polynomial. ``budget`` caps the
    number of candidates examined; ``effort`` is passed to :func:`factorize`.
    """
    if not isinstance(f, Poly):
        f = Poly(f)
    if f.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    coeffs = f.primitive_integer_coeffs()
    roots: set[Fraction] = set()
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
        coeffs = coeffs[k:]
    if len(coeffs) == 1:
        return sorted(roots)
    lead, const = coeffs[-1], coeffs[0]
    f1 = sum(coeffs)
    fm1 = sum(c if i % 2 == 0 else -c for i, c in enumerate(coeffs))
    ps = divisors(factorize(abs(const), effort=effort))
    qs = divisors(factorize(abs(lead), effort=effort))
    # Cauchy bound on root magnitude.
    bound = 1 + max(Fraction(abs(c), abs(lead)) for c in coeffs[:-1])
    needed = sum(bisect_right(ps, math.floor(bound * q)) for q in qs)
    if needed > budget:
        raise ResourceLimitError(f"rational root search needs {needed} candidates (budget {budget})")
    for q in qs:
        for p in ps:
            if Fraction(p, q) > bound:
                break
            if math.gcd(p, q) != 1:
                continue
            for s in (p, -p):
                # (q t - s) | f forces (q - s) | f(1) and (q + s) | f(-1).
                if q - s and f1 % (q - s):
                    continue
                if q + s and fm1 % (q + s):
                    continue
                if _int_poly_vanishes(coeffs, s, q):
                    roots.add(Fraction(s, q))
    return sorted(roots)


def isqrt_ceil(n: int) -> int:
    """Least integer r >= 0 with r*r >= n."""
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ceil_sqrt_rational(x: Fraction) -> int:
    """Least integer r >= 0 with r*r >= x, decided exactly."""
    x = as_rational(x)
    if x <= 0:
        return 0
    r = isqrt_ceil(-(-x.numerator // x.denominator))
    while r > 0 and (r - 1) ** 2 >= x:
        r -= 1
    while r * r < x:
        r += 1
    return r


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel of a non-zero integer."""
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorize(abs(n)):
        if e % 2:
            out *= p
    return sign * out


__all__ = [
    "Rational", "Factorization", "Poly", "as_rational", "is_prime", "next_prime", "primes_from",
    "factorize", "prime_divisors", "divisors", "valuation", "legendre", "f2_solve",
    "f2_is_consistent", "rational_roots", "isqrt_ceil", "ceil_sqrt_rational", "is_square",
    "squarefree_part", "MR_DETERMINISTIC_BOUND",
]
