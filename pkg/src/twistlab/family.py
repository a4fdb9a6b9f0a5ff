"""Exact constructors for the twist family y^2 = f_d(x) and its companions.

All arithmetic is over Q with Python integers; no floating point appears in
this module. The verifiers return ``True``/``False`` for the identity they
check and raise :class:`~twistlab.errors.Inapplicable` when the (d, p) pair
does not satisfy the precondition of the factorization being tested.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .arith import is_prime, sqrt_mod_p
from .errors import DomainError, Inapplicable, UsageError
from .ffcount import legendre, reduce_mod_p
from .poly import X, ExactPoly, discriminant

__all__ = [
    "FamilyConstants",
    "CurveTag",
    "CurveSpec",
    "family_constants",
    "build_fd",
    "build_Fd_integral",
    "build_gd",
    "resolvent_cubic",
    "disc",
    "expected_disc_fd",
    "verify_disc_fd",
    "verify_quadratic_factorization",
    "verify_two_cubic_factorization",
    "build_typeB",
    "typeB_identity",
    "E0",
    "E1",
    "E2",
    "C1",
    "build_Ed4",
    "build_Ed5",
    "H36",
    "verify_H36",
    "curve",
    "conductor_bound_statement",
    "conductor_bound_used",
]


def _check_d(d: int) -> int:
    d = int(d)
    if d in (0, 3, -3):
        raise DomainError(f"d={d} is excluded (need d not in {{0, 3, -3}})")
    return d


@dataclass(frozen=True)
class FamilyConstants:
    u: Fraction
    v: Fraction
    s: Fraction
    z: Fraction

    def relation_holds(self) -> bool:
        # u^3 - z^2 = 3 s^2 v
        return self.u**3 - self.z**2 == 3 * self.s**2 * self.v


def family_constants(d: int) -> FamilyConstants:
    d = _check_d(d)
    return FamilyConstants(
        Fraction(1), Fraction(d), Fraction(2, d + 3), Fraction(d - 3, d + 3)
    )


def build_fd(d: int) -> ExactPoly:
    """The sextic f_d with leading coefficient 27(d-3)/(d+3)."""
    k = family_constants(d)
    s, z, v = k.s, k.z, k.v
    return ExactPoly.from_descending(
        [
            27 * z,
            -162 * s * v,
            -135 * v * z,
            180 * s * v**2,
            45 * v**2 * z,
            -18 * s * v**3,
            -(v**3) * z,
        ]
    )


def build_Fd_integral(d: int) -> ExactPoly:
    """(d+3)^2 f_d, an integral model of the same curve."""
    d = _check_d(d)
    F = build_fd(d) * (d + 3) ** 2
    assert F.is_integral()
    return F


def build_gd(d: int) -> ExactPoly:
    """Monic cubic x^3 - 3x/4 - (d-3)/(4(d+3)) whose root generates the S3 field."""
    d = int(d)
    if d == -3:
        raise DomainError("g_d is undefined at d=-3")
    return ExactPoly([-Fraction(d - 3, 4 * (d + 3)), Fraction(-3, 4), 0, 1])


def resolvent_cubic(d: int) -> ExactPoly:
    """x^3 + 12d/(d-3) x^2 - 4d x - 16d^2/(3(d-3)); its roots pair up the roots of f_d."""
    d = _check_d(d)
    return ExactPoly(
        [-Fraction(16 * d * d, 3 * (d - 3)), -4 * d, Fraction(12 * d, d - 3), 1]
    )


def disc(f: ExactPoly) -> Fraction:
    return discriminant(f)


def expected_disc_fd(d: int) -> int:
    return 2**26 * 3**21 * d**15


def verify_disc_fd(d: int) -> bool:
    d = _check_d(d)
    ok_fd = disc(build_fd(d)) == expected_disc_fd(d)
    ok_int = disc(build_Fd_integral(d)) == expected_disc_fd(d) * (d + 3) ** 20
    return ok_fd and ok_int


def _poly_mul_mod(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _trim(a: list[int]) -> list[int]:
    a = a[:]
    while a and a[-1] == 0:
        a.pop()
    return a


def _check_good(d: int, p: int) -> None:
    if p < 5 or not is_prime(p):
        raise UsageError(f"p={p} must be a prime >= 5")
    if (d * (d + 3)) % p == 0:
        raise UsageError(f"p={p} is a bad prime for d={d}")


def verify_quadratic_factorization(d: int, p: int) -> bool:
    """f_d = 27(d-3)/(d+3) * prod (x^2 + r x - d/3) over the resolvent roots r, mod p.

    Also checks disc(resolvent) = 2^8 d^3 (d+3)^4 / (d-3)^4 exactly.
    """
    d = _check_d(d)
    _check_good(d, p)
    if (d - 3) % p == 0:
        raise Inapplicable(f"resolvent has a pole at p={p} | d-3")
    res = resolvent_cubic(d)
    red = reduce_mod_p(res, p)
    roots = [r for r in range(p) if sum(c * pow(r, i, p) for i, c in enumerate(red)) % p == 0]
    if len(roots) != 3:
        raise Inapplicable(f"resolvent does not split completely mod {p}")
    disc_ok = disc(res) == Fraction(2**8 * d**3 * (d + 3) ** 4, (d - 3) ** 4)
    third_d = Fraction(d, 3)
    prod = reduce_mod_p([build_fd(d).leading], p)
    for r in roots:
        prod = _poly_mul_mod(prod, reduce_mod_p([-third_d, r, 1], p), p)
    return disc_ok and _trim(prod) == reduce_mod_p(build_fd(d), p)


def verify_two_cubic_factorization(d: int, p: int) -> bool:
    """Split f_d into the two conjugate cubics over Q(sqrt(3d)), checked mod p.

    The cubics are x^3 - w x^2 - d x + (d/9) w with
    w = 6d/(d-3) +/- (d+3)/(d-3) sqrt(3d); their product is f_d up to the
    leading coefficient 27(d-3)/(d+3).
    """
    d = _check_d(d)
    _check_good(d, p)
    if (d - 3) % p == 0:
        raise Inapplicable(f"cubic factors have a pole at p={p} | d-3")
    if legendre(3 * d, p) != 1:
        raise Inapplicable(f"3d is not a square mod {p}")
    root = sqrt_mod_p(3 * d, p)
    target = reduce_mod_p(build_fd(d), p)
    lead = reduce_mod_p([build_fd(d).leading], p)
    a = reduce_mod_p([Fraction(6 * d, d - 3)], p)[0]
    b = reduce_mod_p([Fraction(d + 3, d - 3)], p)[0]
    ninth_d = reduce_mod_p([Fraction(d, 9)], p)[0]
    for r in (root, (-root) % p):
        w_plus = (a + b * r) % p
        w_minus = (a - b * r) % p
        cubics = [[ninth_d * w % p, -d % p, -w % p, 1] for w in (w_plus, w_minus)]
        prod = _poly_mul_mod(_poly_mul_mod(lead, cubics[0], p), cubics[1], p)
        if _trim(prod) != target:
            return False
    return True


def build_typeB(d: int) -> ExactPoly:
    """Sextic of the D12^B family, coefficients as a polynomial in d."""
    d = int(d)
    if d == 0:
        raise DomainError("d=0 is excluded")
    a = Fraction(27 * (d * d + d), 2)
    b = 81 * (d * d - d)
    return ExactPoly.from_descending(
        [a, b, 15 * a, 270 * (d * d - d), 15 * a, b, a]
    )


def typeB_identity(d: int) -> bool:
    """The D12^B sextic equals (27d/2)((x-1)^6 + d(x+1)^6)."""
    rewritten = Fraction(27 * d, 2) * ((X - 1) ** 6 + d * (X + 1) ** 6)
    return build_typeB(d) == rewritten


E0 = ExactPoly([1, 0, 0, 1])  # y^2 = x^3 + 1
E1 = ExactPoly([0, -3, 0, 1])  # y^2 = x^3 - 3x
E2 = ExactPoly([0, 18, 0, -2])  # y^2 = -2x^3 + 18x
C1 = ExactPoly([0, 18, 0, -42, 0, 24])  # y^2 = 24x^5 - 42x^3 + 18x


def build_Ed4(d: int) -> ExactPoly:
    if d == 0:
        raise DomainError("d=0 is excluded")
    return ExactPoly([2**3 * 3**3 * d**4, 0, 0, 1])


def build_Ed5(d: int) -> ExactPoly:
    if d == 0:
        raise DomainError("d=0 is excluded")
    return ExactPoly([2**3 * 3**3 * d**5, 0, 0, 1])


# ring class polynomial of discriminant -36
H36 = ExactPoly([-1790957481984, -153542016, 1])
_J_RATIONAL = 76771008
_J_SQRT3 = 44330496


def verify_H36() -> bool:
    """H_{-36}(76771008 +/- 44330496 sqrt 3) = 0, exactly in Z[sqrt 3]."""
    for sign in (1, -1):
        # (a + b sqrt3) represented as the pair (a, b)
        a, b = _J_RATIONAL, sign * _J_SQRT3
        acc = (0, 0)
        for c in reversed(H36.coeffs):
            x, y = acc
            acc = (x * a + 3 * y * b + int(c), x * b + y * a)
        if acc != (0, 0):
            return False
    return True


class CurveTag(enum.Enum):
    Cd = "Cd"
    TypeB = "TypeB"
    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    C1 = "C1"
    Ed4 = "Ed4"
    Ed5 = "Ed5"


@dataclass(frozen=True)
class CurveSpec:
    tag: CurveTag
    d: int | None = None

    def __post_init__(self):
        if self.tag is CurveTag.Cd:
            _check_d(self.d)
        elif self.tag in (CurveTag.TypeB, CurveTag.Ed4, CurveTag.Ed5):
            if not self.d:
                raise DomainError(f"{self.tag.value} needs a nonzero d")

    def polynomial(self) -> ExactPoly:
        return curve(self)


def curve(spec: CurveSpec) -> ExactPoly:
    """Integral defining polynomial for the curve y^2 = F(x) named by ``spec``."""
    fixed = {CurveTag.E0: E0, CurveTag.E1: E1, CurveTag.E2: E2, CurveTag.C1: C1}
    if spec.tag in fixed:
        return fixed[spec.tag]
    if spec.tag is CurveTag.Cd:
        return build_Fd_integral(spec.d)
    if spec.tag is CurveTag.TypeB:
        return build_typeB(spec.d)
    if spec.tag is CurveTag.Ed4:
        return build_Ed4(spec.d)
    return build_Ed5(spec.d)


def conductor_bound_statement(d: int) -> int:
    """The bound 2^26 3^21 d^4 (d+3)^4 as stated for the conductor."""
    return 2**26 * 3**21 * abs(d) ** 4 * abs(d + 3) ** 4


def conductor_bound_used(d: int) -> int:
    """The bound 2^26 3^21 d^2 (d+3)^4 used when averaging log-conductors."""
    return 2**26 * 3**21 * abs(d) ** 2 * abs(d + 3) ** 4
