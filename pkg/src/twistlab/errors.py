"""Exception hierarchy shared by every module."""


class TwistlabError(Exception):
    """Base class for all errors raised by twistlab."""


class UsageError(TwistlabError, ValueError):
    """Arguments outside an operation's documented domain (bad p, bad d)."""


class DomainError(TwistlabError, ValueError):
    """Excluded parameter value, e.g. d in {0, 3, -3}."""


class DegenerateModel(TwistlabError):
    """The reduced model is singular or has an unsupported degree."""


class NotReducible(TwistlabError):
    """A rational coefficient has a denominator divisible by p."""


class Inapplicable(TwistlabError):
    """A verifier's precondition does not hold for this (d, p)."""


class BadPrime(TwistlabError, ValueError):
    """A good-prime operation was asked about a prime of bad reduction."""


class InferenceAmbiguous(TwistlabError):
    """Twist-kernel inference ended with zero or several surviving classes."""


class InconsistencyError(TwistlabError, ArithmeticError):
    """An internal cross-check failed; this signals a bug, not bad input."""


class CacheCorrupted(TwistlabError):
    """A cache file has a malformed line."""

    def __init__(self, path, lineno, line):
        super().__init__(f"{path}:{lineno}: malformed cache line {line!r}")
        self.path = path
        self.lineno = lineno
        self.line = line


class Unsupported(TwistlabError):
    """The quantity is outside what the library computes (e.g. p = 2, 3 exponents)."""
