"""Conductor-based bounds, computed with exact rational arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import WeierstrassModel, conductor, minimal_model, require_non_cm
from .errors import MultiplicativeReductionError
from .numtheory import ceil_sqrt_rational, factorize, isqrt_ceil


def _radical_factor(N: int, fac=None) -> Fraction:
    # prod over p | N of (1/2 + 1/(2p)) = (p + 1) / (2p)
    fac = factorize(N) if fac is None else fac
    out = Fraction(1)
    for p, _ in fac:
        out *= Fraction(p + 1, 2 * p)
    return out


@dataclass(frozen=True)
class ConductorBound:
    N: int
    factorization: tuple[tuple[int, int], ...]
    #: square of (2 sqrt(3) / 3) sqrt(N prod (1/2 + 1/(2p)))
    value_squared: Fraction
    ceiling: int

    @property
    def bound(self) -> int:
        return max(37, self.ceiling)


def conductor_bound_from_N(N: int, fac=None) -> ConductorBound:
    fac = tuple(factorize(N)) if fac is None else tuple(fac)
    sq = Fraction(4, 3) * N * _radical_factor(N, fac)
    return ConductorBound(N, fac, sq, ceil_sqrt_rational(sq))


def conductor_bound(model: WeierstrassModel) -> int:
    """max(37, ceil((2 sqrt 3 / 3) sqrt(N prod_{p|N} (1/2 + 1/(2p)))))

    for a non-CM curve without multiplicative primes.
    """
    E = minimal_model(model)
    require_non_cm(E.j)
    N, fac = conductor(E)
    for p, f in fac:
        if f == 1:
            raise MultiplicativeReductionError(p)
    cb = conductor_bound_from_N(N, fac)
    assert cb.bound <= max(37, isqrt_ceil(N)), (N, cb)
    return cb.bound


def sturm_prime_bound(N: int) -> int:
    """floor(N/3 prod_{p|N}(1/2 + 1/(2p)) - 1); no prime need exist below it."""
    if N < 1:
        raise ValueError("N must be positive")
    return math.floor(Fraction(N, 3) * _radical_factor(N) - 1)
