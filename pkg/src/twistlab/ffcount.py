"""Finite-field arithmetic and brute-force point counting.

Everything here is direct enumeration over F_p or F_{p^2}. These counts are
the oracle that the table-driven Euler factors in :mod:`twistlab.frobdata`
are checked against, so nothing in this module may depend on that table.

Polynomials are coefficient sequences in ascending order (index = degree).
Entries may be ``int`` or ``fractions.Fraction``; anything exposing a
``coeffs`` attribute (such as :class:`twistlab.poly.ExactPoly`) also works.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from .arith import is_prime
from .errors import DegenerateModel, InconsistencyError, NotReducible, UsageError

__all__ = [
    "FpElem",
    "QuadExtElem",
    "SplitType",
    "PointCount",
    "check_prime",
    "reduce_mod_p",
    "legendre",
    "char_sum",
    "count_points",
    "trace_ap",
    "genus2_a1a2",
    "cubic_split_type",
    "root_count_mod_p",
    "smallest_nonresidue",
]

# Keeps numpy temporaries under ~32 MB during F_{p^2} enumeration.
_BLOCK = 1 << 21


def check_prime(p: int, minimum: int = 5) -> int:
    p = int(p)
    if p < minimum or not is_prime(p):
        raise UsageError(f"expected a prime >= {minimum}, got {p}")
    return p


def _coeff_list(f) -> list:
    return list(getattr(f, "coeffs", f))


def reduce_mod_p(f, p: int) -> list[int]:
    """Reduce rational coefficients mod p, dropping vanishing top terms."""
    out = []
    for c in _coeff_list(f):
        c = Fraction(c)
        if c.denominator % p == 0:
            raise NotReducible(f"denominator {c.denominator} vanishes mod {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        q = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - q * bc) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _is_separable(f: list[int], p: int) -> bool:
    df = [i * c % p for i, c in enumerate(f)][1:]
    while df and df[-1] == 0:
        df.pop()
    if not df:
        return len(f) <= 1
    a, b = f, df
    while b:
        a, b = b, _poly_rem(a, b, p)
    return len(a) == 1


@dataclass(frozen=True)
class FpElem:
    """An element of F_p."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def __add__(self, other):
        return FpElem(self.value + int(other), self.p)

    def __sub__(self, other):
        return FpElem(self.value - int(other), self.p)

    def __mul__(self, other):
        return FpElem(self.value * int(other), self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __int__(self):
        return self.value

    def __pow__(self, n: int):
        return FpElem(pow(self.value, n, self.p), self.p)

    def legendre(self) -> int:
        return legendre(self.value, self.p)


@dataclass(frozen=True)
class QuadExtElem:
    """a + b*sqrt(nu) in F_{p^2} = F_p(sqrt(nu)), nu the smallest non-residue."""

    a: int
    b: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    @property
    def nu(self) -> int:
        return smallest_nonresidue(self.p)

    def _lift(self, other) -> "QuadExtElem":
        if isinstance(other, QuadExtElem):
            return other
        return QuadExtElem(int(other), 0, self.p)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExtElem(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __mul__(self, other):
        o = self._lift(other)
        return QuadExtElem(
            self.a * o.a + self.nu * self.b * o.b, self.a * o.b + self.b * o.a, self.p
        )

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - self.nu * self.b * self.b) % self.p

    def quadratic_character(self) -> int:
        """+1, -1 or 0; an element of F_{p^2} is a square iff its norm is."""
        return legendre(self.norm(), self.p)


class SplitType(enum.Enum):
    Split3 = 3
    OneRoot = 1
    Irreducible = 0


@dataclass(frozen=True)
class PointCount:
    q: int
    count: int


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    p = int(p)
    if p < 3 or not is_prime(p):
        raise UsageError(f"legendre needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=256)
def _chi_table(p: int) -> np.ndarray:
    chi = np.full(p, -1, dtype=np.int8)
    x = np.arange(1, p, dtype=np.int64)
    chi[(x * x) % p] = 1
    chi[0] = 0
    chi.setflags(write=False)
    return chi


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    chi = _chi_table(p)
    return int(np.flatnonzero(chi == -1)[0])


def _values_mod_p(f: list[int], p: int) -> np.ndarray:
    """f(x) mod p for x = 0..p-1."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(f):
        acc = (acc * xs + c) % p
    return acc


def char_sum(f, p: int) -> int:
    """Sum over t in F_p of (f(t)/p)."""
    p = check_prime(p)
    red = reduce_mod_p(f, p)
    chi = _chi_table(p)
    return int(chi[_values_mod_p(red, p)].sum(dtype=np.int64))


def _quad_char_sum(f: list[int], p: int) -> int:
    """Sum of the quadratic character of F_{p^2} over f(F_{p^2})."""
    nu = smallest_nonresidue(p)
    chi = _chi_table(p)
    total = 0
    n = p * p
    for start in range(0, n, _BLOCK):
        idx = np.arange(start, min(n, start + _BLOCK), dtype=np.int64)
        xa, xb = idx // p, idx % p
        ra = np.zeros_like(xa)
        rb = np.zeros_like(xa)
        for c in reversed(f):
            ra, rb = (ra * xa + nu * ((rb * xb) % p) + c) % p, (ra * xb + rb * xa) % p
        norm = (ra * ra - nu * ((rb * rb) % p)) % p
        total += int(chi[norm].sum(dtype=np.int64))
    return total


def count_points(F, p: int, ext: int = 1) -> PointCount:
    """Points on the smooth projective model of y^2 = F(x) over F_{p^ext}."""
    p = check_prime(p)
    if ext not in (1, 2):
        raise UsageError("ext must be 1 or 2")
    red = reduce_mod_p(F, p)
    deg = len(red) - 1
    if deg not in (3, 5, 6):
        raise DegenerateModel(f"degree {deg} mod {p} is not 3, 5 or 6")
    if not _is_separable(red, p):
        raise DegenerateModel(f"model is singular mod {p}")
    q = p**ext
    if ext == 1:
        affine = p + int(_chi_table(p)[_values_mod_p(red, p)].sum(dtype=np.int64))
        at_inf = 1 + legendre(red[-1], p) if deg == 6 else 1
    else:
        affine = q + _quad_char_sum(red, p)
        # a nonzero element of F_p is always a square in F_{p^2}
        at_inf = 2 if deg == 6 else 1
    return PointCount(q, affine + at_inf)


def trace_ap(E, p: int) -> int:
    """Trace of Frobenius p + 1 - #E(F_p) of an elliptic curve y^2 = E(x)."""
    p = check_prime(p)
    if len(reduce_mod_p(E, p)) != 4:
        raise DegenerateModel(f"not a cubic mod {p}")
    return p + 1 - count_points(E, p, 1).count


def genus2_a1a2(F, p: int) -> tuple[int, int]:
    """(a_{p,1}, a_{p,2}) of the zeta numerator, from counts over F_p and F_{p^2}."""
    n1 = count_points(F, p, 1).count
    n2 = count_points(F, p, 2).count
    a1 = n1 - p - 1
    twice_a2 = a1 * a1 - (p * p + 1 - n2)
    if twice_a2 % 2:
        raise InconsistencyError(f"non-integral a2 at p={p}: counts {n1}, {n2}")
    a2 = twice_a2 // 2
    if abs(a1) > 4 * isqrt(p) + 4 or abs(a2) > 6 * p:
        raise InconsistencyError(f"Weil bound violated at p={p}: a1={a1}, a2={a2}")
    return a1, a2


def root_count_mod_p(f, p: int) -> int:
    red = reduce_mod_p(f, p)
    return int(np.count_nonzero(_values_mod_p(red, p) == 0))


def cubic_split_type(g, p: int) -> SplitType:
    """Splitting type of a separable cubic over F_p, by counting roots."""
    p = check_prime(p)
    red = reduce_mod_p(g, p)
    if len(red) != 4:
        raise DegenerateModel(f"cubic drops degree mod {p}")
    if not _is_separable(red, p):
        raise DegenerateModel(f"cubic is inseparable mod {p}")
    n = int(np.count_nonzero(_values_mod_p(red, p) == 0))
    if n == 2:
        raise DegenerateModel("separable cubic with exactly two roots")
    return SplitType(n)
