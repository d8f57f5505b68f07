"""Exceptional primes of non-CM elliptic curves over Q.

The raw stage returns a finite set S of primes containing every prime l for
which the mod-l Galois representation fails to be surjective. The refinement
stage then decides each member of S, attaching a certificate to every
surjective or non-surjective verdict.
"""

from __future__ import annotations

from .bounds import conductor_bound, sturm_prime_bound
from .curves import WeierstrassModel, ap, ap_good, conductor, curve_from_j, minimal_model, tate_local_data
from .errors import (
    BoundExceededError,
    CMCurveError,
    ExceptionalPrimesError,
    InputParseError,
    IntegralJError,
    MultiplicativeReductionError,
    ResourceLimitError,
    SingularCurveError,
)
from .nonintegral import bounds_c, shortcut_set
from .pipeline import CurveInput, ExceptionalReport, exceptional_set, parse_curves, refine, verify_conjecture
from .sieve import S0, ExceptionalSet, run_sieve
from .small_primes import PrimeStatus, Status, certify_large, check_mod_11, check_mod_13, check_mod_small

__version__ = "0.1.0"

__all__ = [
    "BoundExceededError", "CMCurveError", "CurveInput", "ExceptionalPrimesError", "ExceptionalReport",
    "ExceptionalSet", "InputParseError", "IntegralJError", "MultiplicativeReductionError", "PrimeStatus",
    "ResourceLimitError", "S0", "SingularCurveError", "Status", "WeierstrassModel", "ap", "ap_good",
    "bounds_c", "certify_large", "check_mod_11", "check_mod_13", "check_mod_small", "conductor",
    "conductor_bound", "curve_from_j", "exceptional_set", "minimal_model", "parse_curves", "refine",
    "run_sieve", "shortcut_set", "sturm_prime_bound", "tate_local_data", "verify_conjecture",
]
