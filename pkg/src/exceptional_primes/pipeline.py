"""Curve ingestion, orchestration and report assembly.

A curve goes through two stages. The raw stage produces the theorem-level
set S, either by the sieve (integral j) or from the denominator of j. The
refinement stage then decides every prime of S individually.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, TextIO

from .curves import (
    DEFAULT_COUNTING_BOUND,
    CM_J_INVARIANTS,
    WeierstrassModel,
    conductor,
    curve_from_j,
    is_cm_j,
    minimal_model,
)
from .errors import CMCurveError, ExceptionalPrimesError, InputParseError, IntegralJError
from .nonintegral import denominator_profile, shortcut_set
from .sieve import DEFAULT_SEARCH_CAP, S0, ExceptionalSet, run_sieve
from .small_primes import (
    DEFAULT_WITNESS_BOUND,
    DEFAULT_XNS11_BOUND,
    FrobeniusTraces,
    PrimeStatus,
    Status,
    certify_large,
    check_ladic,
    check_mod_11,
    check_mod_13,
    check_mod_small,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- input -------------------------------------------------------------------


@dataclass(frozen=True)
class CurveInput:
    label: str
    ainvs: tuple[int, ...] | None = None
    j: Fraction | None = None
    lineno: int = 0

    def model(self) -> WeierstrassModel:
        if self.ainvs is not None:
            return WeierstrassModel(*self.ainvs)
        return curve_from_j(self.j)

    @property
    def j_invariant(self) -> Fraction:
        return self.j if self.j is not None else WeierstrassModel(*self.ainvs).j


def parse_curve_line(line: str, lineno: int = 0) -> CurveInput | None:
    """Parse one input line; ``None`` for blank and comment lines."""
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    parts = text.split()
    label, rest = parts[0], parts[1:]
    if rest and rest[0] == "j":
        if len(rest) != 2:
            raise InputParseError(lineno, line, "expected 'label j <num>[/<den>]'")
        try:
            j = Fraction(rest[1])
        except (ValueError, ZeroDivisionError):
            raise InputParseError(lineno, line, f"bad rational {rest[1]!r}") from None
        if is_cm_j(j):
            raise CMCurveError(j)
        return CurveInput(label, j=j, lineno=lineno)
    if len(rest) != 5:
        raise InputParseError(lineno, line, "expected 'label a1 a2 a3 a4 a6'")
    try:
        ainvs = tuple(int(a) for a in rest)
    except ValueError:
        raise InputParseError(lineno, line, "a-invariants must be decimal integers") from None
    try:
        E = WeierstrassModel(*ainvs)
    except ExceptionalPrimesError as exc:
        raise InputParseError(lineno, line, str(exc)) from None
    if is_cm_j(E.j):
        raise CMCurveError(E.j)
    return CurveInput(label, ainvs=ainvs, lineno=lineno)


def iter_curves(lines: Iterable[str]) -> Iterator[tuple[int, str, CurveInput | ExceptionalPrimesError]]:
    """Yield (lineno, line, parsed curve or the error it raised)."""
    for lineno, line in enumerate(lines, start=1):
        try:
            c = parse_curve_line(line, lineno)
        except ExceptionalPrimesError as exc:
            yield lineno, line, exc
            continue
        if c is not None:
            yield lineno, line, c


def parse_curves(stream: TextIO | Iterable[str]) -> list[CurveInput]:
    """Strict parse: the first bad line raises."""
    out = []
    for lineno, line, item in iter_curves(stream):
        if isinstance(item, ExceptionalPrimesError):
            if isinstance(item, CMCurveError):
                raise CMCurveError(item.j) from None
            raise item
        out.append(item)
    return out


# -- reports -----------------------------------------------------------------


@dataclass
class Options:
    witness_bound: int = DEFAULT_WITNESS_BOUND
    counting_bound: int = DEFAULT_COUNTING_BOUND
    xns11_bound: int = DEFAULT_XNS11_BOUND
    search_cap: int = DEFAULT_SEARCH_CAP
    mode: str = "auto"
    ladic: bool = True
    refine: bool = True


@dataclass
class ExceptionalReport:
    label: str
    j: Fraction
    mode: str
    raw_S: ExceptionalSet
    conductor: int | None = None
    qlist: list[int] | None = None
    r: int | None = None
    p_r: int | None = None
    g: int | None = None
    refined: dict[int, PrimeStatus] = field(default_factory=dict)
    ladic: dict[int, PrimeStatus] = field(default_factory=dict)

    @property
    def d(self) -> int | None:
        return None if self.qlist is None else len(self.qlist)

    def flagged_large(self) -> set[int]:
        """Primes > 13 not certified surjective."""
        return {ell for ell, st in self.refined.items() if ell > 13 and st.status is not Status.SURJECTIVE}

    def to_dict(self) -> dict:
        out: dict = {"schema_version": SCHEMA_VERSION, "label": self.label, "j": fmt_rational(self.j)}
        if self.conductor is not None:
            out["conductor"] = self.conductor
        out["mode"] = self.mode
        out["qlist"] = self.qlist
        out["d"] = self.d
        out["r"] = self.r
        if self.mode == "sieve":
            out["p_r"] = self.p_r
        if self.g is not None:
            out["g"] = self.g
        out["raw_S"] = [{"prime": ell, "reason": self.raw_S.reasons[ell].as_dict()} for ell in self.raw_S.primes]
        out["refined"] = [self.refined[ell].as_dict() for ell in sorted(self.refined)]
        if self.ladic:
            out["ladic"] = [self.ladic[ell].as_dict() for ell in sorted(self.ladic)]
        return out


def exceptional_set(curve: CurveInput, options: Options | None = None) -> ExceptionalReport:
    """Raw stage: the theorem-level set S with one reason per prime."""
    opts = options or Options()
    j = curve.j_invariant
    if is_cm_j(j):
        raise CMCurveError(j)
    mode = opts.mode
    if mode == "auto":
        mode = "shortcut" if j.denominator > 1 else "sieve"
    N = None
    if curve.ainvs is not None:
        N = conductor(WeierstrassModel(*curve.ainvs))[0]
    if mode == "shortcut":
        if j.denominator == 1:
            raise IntegralJError(f"denominator shortcut needs non-integral j, got {j}")
        return ExceptionalReport(curve.label, j, "denominator_shortcut", shortcut_set(j), conductor=N,
                                 g=denominator_profile(j).g)
    if mode != "sieve":
        raise ValueError(f"unknown mode {mode!r}")
    S, state = run_sieve(curve.model(), cap=opts.search_cap, counting_bound=opts.counting_bound)
    return ExceptionalReport(curve.label, j, "sieve", S, conductor=N, qlist=state.qlist,
                             r=state.r, p_r=state.p_r)


def refine(report: ExceptionalReport, curve: CurveInput, options: Options | None = None) -> ExceptionalReport:
    """Decide each prime of ``report.raw_S``; failures degrade to undetermined."""
    opts = options or Options()
    j = report.j
    model = minimal_model(curve.model())
    traces: FrobeniusTraces | None = None

    def get_traces() -> FrobeniusTraces:
        nonlocal traces
        if traces is None:
            traces = FrobeniusTraces(model, N=report.conductor, counting_bound=opts.counting_bound)
        return traces

    for ell in report.raw_S.primes:
        try:
            if ell in (2, 3, 5, 7):
                st = check_mod_small(j, ell)
            elif ell == 11:
                st = check_mod_11(j, opts.xns11_bound)
            elif ell == 13:
                st = check_mod_13(model, j, opts.witness_bound, traces=get_traces())
            else:
                st = certify_large(model, ell, opts.witness_bound, traces=get_traces(), j=j)
        except ExceptionalPrimesError as exc:
            st = PrimeStatus(ell, Status.UNDETERMINED, {"kind": "error", "detail": str(exc)})
        report.refined[ell] = st
        if opts.ladic:
            report.ladic[ell] = check_ladic(j, ell, st)
    return report


def process_curve(curve: CurveInput, options: Options | None = None) -> ExceptionalReport:
    opts = options or Options()
    report = exceptional_set(curve, opts)
    if opts.refine:
        refine(report, curve, opts)
    return report


def failure_record(lineno: int, label: str | None, exc: BaseException) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "label": label,
        "line": lineno,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }


def _process_item(args) -> tuple[dict, ExceptionalReport | None]:
    lineno, line, item, opts = args
    if isinstance(item, BaseException):
        label = line.split()[0] if line.split() else None
        return failure_record(lineno, label, item), None
    try:
        rep = process_curve(item, opts)
    except ExceptionalPrimesError as exc:
        log.warning("curve %s (line %d) failed: %s", item.label, lineno, exc)
        return failure_record(lineno, item.label, exc), None
    return rep.to_dict(), rep


def run_batch(lines: Iterable[str], options: Options | None = None,
              jobs: int = 1) -> list[tuple[dict, ExceptionalReport | None]]:
    """Process every curve in input order; one bad curve never stops the batch."""
    opts = options or Options()
    items = [(lineno, line, item, opts) for lineno, line, item in iter_curves(lines)]
    todo = [it for it in items if isinstance(it[2], CurveInput)]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = dict(zip((id(it) for it in todo), pool.map(_process_item, todo, chunksize=1)))
        return [done[id(it)] if id(it) in done else _process_item(it) for it in items]
    return [_process_item(it) for it in items]


def dumps_record(record: dict) -> str:
    return json.dumps(record, separators=(", ", ": "))


# -- conjecture check --------------------------------------------------------

S0_BY_J = {j: ell for ell, j in S0}


@dataclass
class VerificationSummary:
    curves: int = 0
    failures: list[dict] = field(default_factory=list)
    s0_curves: int = 0
    undetermined_large: int = 0
    max_p_r: int | None = None
    modes: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "curves": self.curves,
            "s0_curves": self.s0_curves,
            "undetermined_large": self.undetermined_large,
            "max_p_r": self.max_p_r,
            "modes": dict(sorted(self.modes.items())),
            "failures": self.failures,
        }


def verify_conjecture(reports: Iterable[ExceptionalReport]) -> VerificationSummary:
    """Check that no prime > 13 is exceptional except the S0 prime for S0 j-invariants."""
    summary = VerificationSummary()
    for rep in reports:
        summary.curves += 1
        summary.modes[rep.mode] = summary.modes.get(rep.mode, 0) + 1
        if rep.p_r is not None:
            summary.max_p_r = rep.p_r if summary.max_p_r is None else max(summary.max_p_r, rep.p_r)
        expected = {S0_BY_J[rep.j]} if rep.j in S0_BY_J else set()
        summary.s0_curves += bool(expected)
        flagged = rep.flagged_large()
        summary.undetermined_large += sum(
            1 for ell in flagged if rep.refined[ell].status is Status.UNDETERMINED)
        if flagged != expected:
            summary.failures.append({"label": rep.label, "j": fmt_rational(rep.j),
                                     "flagged": sorted(flagged), "expected": sorted(expected)})
    return summary


__all__ = [
    "CurveInput", "ExceptionalReport", "Options", "VerificationSummary", "CM_J_INVARIANTS",
    "parse_curve_line", "parse_curves", "iter_curves", "exceptional_set", "refine", "process_curve",
    "run_batch", "verify_conjecture", "dumps_record", "SCHEMA_VERSION",
]
