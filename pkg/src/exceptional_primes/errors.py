"""Exception types shared across the package."""

from __future__ import annotations


class ExceptionalPrimesError(Exception):
    """Base class for all errors raised by this package."""


class ResourceLimitError(ExceptionalPrimesError):
    """A computation exceeded its effort budget.

    Callers must turn this into an "undetermined" outcome rather than
    dropping whatever the computation was supposed to find.
    """


class SingularCurveError(ExceptionalPrimesError, ValueError):
    pass


class CMCurveError(ExceptionalPrimesError, ValueError):
    """Input has complex multiplication; the algorithms here assume non-CM."""

    def __init__(self, j):
        super().__init__(f"j-invariant {j} is a CM j-invariant")
        self.j = j

    def __reduce__(self):
        return type(self), (self.j,)


class BoundExceededError(ExceptionalPrimesError):
    """A prime search or point count went past its configured cap."""


class IntegralJError(ExceptionalPrimesError, ValueError):
    pass


class MultiplicativeReductionError(ExceptionalPrimesError, ValueError):
    def __init__(self, p: int):
        super().__init__(f"curve has multiplicative reduction at p = {p}")
        self.p = p

    def __reduce__(self):
        return type(self), (self.p,)


class InputParseError(ExceptionalPrimesError, ValueError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line
        self.reason = reason

    def __reduce__(self):
        return type(self), (self.lineno, self.line, self.reason)
