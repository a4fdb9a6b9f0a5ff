"""Exact univariate polynomials over Q."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

from sympy import divisors

from .errors import DomainError

__all__ = ["ExactPoly", "X", "resultant", "discriminant"]


class ExactPoly:
    """Polynomial with Fraction coefficients, ascending order (index = degree).

    The zero polynomial has an empty coefficient list; otherwise the leading
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_descending(cls, coeffs: Sequence) -> "ExactPoly":
        return cls(list(coeffs)[::-1])

    @classmethod
    def constant(cls, c) -> "ExactPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"ExactPoly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = ExactPoly([other])
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @staticmethod
    def _coerce(other) -> "ExactPoly":
        if isinstance(other, ExactPoly):
            return other
        if isinstance(other, (int, Rational)):
            return ExactPoly([other])
        raise TypeError(f"cannot combine ExactPoly with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self), len(o))
        return ExactPoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return ExactPoly()
        out = [Fraction(0)] * (len(self) + len(o) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power")
        out, base = ExactPoly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Rational)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "ExactPoly") -> "ExactPoly":
        acc = ExactPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> "ExactPoly":
        return ExactPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content_denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def integer_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise DomainError("polynomial has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    def rational_roots(self) -> list[Fraction]:
        """Distinct rational roots, by the rational root test."""
        if not self.coeffs:
            raise DomainError("zero polynomial")
        cs = list(self.coeffs)
        roots = []
        if cs[0] == 0:
            roots.append(Fraction(0))
            while cs and cs[0] == 0:
                cs.pop(0)
        den = lcm(*(c.denominator for c in cs))
        ints = [int(c * den) for c in cs]
        if len(ints) < 2:
            return roots
        p = ExactPoly(ints)
        for num in divisors(abs(ints[0])):
            for dn in divisors(abs(ints[-1])):
                for r in (Fraction(num, dn), Fraction(-num, dn)):
                    if r not in roots and p(r) == 0:
                        roots.append(r)
        return sorted(roots)

    def disc(self) -> Fraction:
        return discriminant(self)


def _det(rows: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [row[:] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        pv = m[col][col]
        det *= pv
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def resultant(f: ExactPoly, g: ExactPoly) -> Fraction:
    """Res(f, g) as the Sylvester determinant."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        raise DomainError("resultant with the zero polynomial")
    if m == 0:
        return f.leading**n
    if n == 0:
        return g.leading**m
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fd + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gd + [Fraction(0)] * (size - n - 1 - i))
    return _det(rows)


def discriminant(f: ExactPoly) -> Fraction:
    n = f.degree
    if n < 2:
        raise DomainError("discriminant needs degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.leading


X = ExactPoly([0, 1])
