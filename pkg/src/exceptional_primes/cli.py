"""Command-line entry point: ``exceptional-primes {sieve,verify,bound,families}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .bounds import conductor_bound, conductor_bound_from_N, sturm_prime_bound
from .curves import DEFAULT_COUNTING_BOUND, WeierstrassModel, conductor, minimal_model
from .errors import ExceptionalPrimesError
from .nonintegral import bounds_c, denominator_profile
from .pipeline import Options, dumps_record, fmt_rational, run_batch, verify_conjecture
from .sieve import DEFAULT_SEARCH_CAP
from .small_primes import (
    DEFAULT_WITNESS_BOUND,
    DEFAULT_XNS11_BOUND,
    FAMILIES,
    LADIC_FAMILIES,
    check_mod_small,
    family_member,
)

EXIT_OK, EXIT_FATAL, EXIT_ASSERT = 0, 1, 2


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="curve file, or - for stdin")
    p.add_argument("--witness-bound", type=int, default=DEFAULT_WITNESS_BOUND)
    p.add_argument("--counting-bound", type=int, default=DEFAULT_COUNTING_BOUND)
    p.add_argument("--xns11-bound", type=int, default=DEFAULT_XNS11_BOUND)
    p.add_argument("--search-cap", type=int, default=DEFAULT_SEARCH_CAP,
                   help="largest prime tried when streaming sieve rows")
    p.add_argument("--mode", choices=("auto", "sieve", "shortcut"), default="auto")
    p.add_argument("--ladic", choices=("on", "off"), default="on")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("-o", "--output", help="write JSONL reports here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exceptional-primes",
                                     description="Exceptional primes of elliptic curves over Q.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_flags(sub.add_parser("sieve", help="per-curve JSONL reports"))
    _add_run_flags(sub.add_parser("verify", help="check that no prime > 13 is exceptional outside S0"))

    b = sub.add_parser("bound", help="conductor and denominator bounds")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--curve", nargs=5, type=int, metavar=("A1", "A2", "A3", "A4", "A6"))
    g.add_argument("--N", type=int, help="conductor")

    f = sub.add_parser("families", help="family membership of j at a small prime")
    f.add_argument("j", help="rational j-invariant, e.g. 102400 or -17/2")
    f.add_argument("--ell", type=int, required=True, choices=(2, 3, 5, 7, 13))
    return parser


def _options(args) -> Options:
    return Options(witness_bound=args.witness_bound, counting_bound=args.counting_bound,
                   xns11_bound=args.xns11_bound, search_cap=args.search_cap,
                   mode=args.mode, ladic=args.ladic == "on")


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _cmd_sieve(args) -> int:
    results = run_batch(_read_lines(args.input), _options(args), jobs=args.jobs)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for record, _ in results:
            out.write(dumps_record(record) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_batch(_read_lines(args.input), _options(args), jobs=args.jobs)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as out:
            for record, _ in results:
                out.write(dumps_record(record) + "\n")
    summary = verify_conjecture(rep for _, rep in results if rep is not None)
    errors = [rec for rec, rep in results if rep is None]
    body = summary.as_dict()
    body["errors"] = errors
    body["ok"] = summary.ok and not errors
    print(json.dumps(body, indent=2))
    return EXIT_OK if body["ok"] else EXIT_ASSERT


def _cmd_bound(args) -> int:
    if args.N is not None:
        cb = conductor_bound_from_N(args.N)
        body = {"N": args.N, "conductor_bound": cb.bound, "sturm_prime_bound": sturm_prime_bound(args.N)}
    else:
        E = minimal_model(WeierstrassModel(*args.curve))
        N, fac = conductor(E)
        body = {"N": N, "j": fmt_rational(E.j), "sturm_prime_bound": sturm_prime_bound(N)}
        try:
            body["conductor_bound"] = conductor_bound(E)
        except ExceptionalPrimesError as exc:
            body["conductor_bound"] = None
            body["conductor_bound_error"] = str(exc)
        if E.j.denominator > 1:
            cb = bounds_c(E.j)
            body["denominator"] = {"g": denominator_profile(E.j).g, "bound_g": cb.bound_g,
                                   "bound_p": cb.bound_p, "bound_logd": cb.bound_logd}
    print(json.dumps(body, indent=2))
    return EXIT_OK


def _cmd_families(args) -> int:
    j = Fraction(args.j)
    members = {}
    for fam in FAMILIES.get(args.ell, []) + LADIC_FAMILIES.get(args.ell, []):
        t = family_member(j, fam)
        members[fam.label] = None if t is None else fmt_rational(t)
    st = check_mod_small(j, args.ell) if args.ell != 13 else None
    body = {"j": fmt_rational(j), "ell": args.ell, "members": members}
    if st is not None:
        body["status"] = st.as_dict()
    print(json.dumps(body, indent=2))
    return EXIT_OK


COMMANDS = {"sieve": _cmd_sieve, "verify": _cmd_verify, "bound": _cmd_bound, "families": _cmd_families}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except (ExceptionalPrimesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
