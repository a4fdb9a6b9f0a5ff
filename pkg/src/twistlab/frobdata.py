"""Residue degrees, the twist-kernel character, and good-prime Euler data.

At a good prime p > 3 the local factor of a twist of y^2 = x^6 + 1 is fixed by
the triple I(p) = (f_L, f_K, f_M) of residue degrees together with a_p of the
CM curve E0: y^2 = x^3 + 1. For C_d the degrees f_K and f_M come from the
splitting of g_d and of sqrt(-3) mod p. The last bit, whether f_L doubles f_K,
is a quadratic character p -> (m/p) whose kernel m is recovered by matching
the table against brute-force counts (:func:`infer_twist_kernel`).
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

import numpy as np

from . import _kernels
from .arith import is_prime, primes_in, squarefree_part, valuation
from .errors import BadPrime, Inapplicable, InferenceAmbiguous, UsageError
from .family import E0, _check_d, build_fd, build_Fd_integral, build_gd
from .ffcount import (
    SplitType,
    count_points,
    cubic_split_type,
    genus2_a1a2,
    legendre,
    reduce_mod_p,
    trace_ap,
)

log = logging.getLogger(__name__)

__all__ = [
    "EulerSource",
    "FrobeniusProfile",
    "EulerData",
    "TwistKernel",
    "BadKind",
    "BadLambda",
    "TABLE_ROWS",
    "FAMILY_ROWS",
    "ap_E0",
    "residue_degrees",
    "frobenius_profile",
    "kernel_candidates",
    "same_kernel_class",
    "infer_twist_kernel",
    "rule_kernel",
    "euler_factor_good",
    "lambda_p",
    "lambda_p2",
    "bad_prime_lambda",
    "verify_fd_split_consistency",
    "residue_fK",
    "a_p2_from_profile",
]


class EulerSource(enum.Enum):
    FastTable = "FastTable"
    Oracle = "Oracle"


def _row_111(a, p):
    return -2 * a, a * a + 2 * p


def _row_211(a, p):
    return 2 * a, a * a + 2 * p


def _row_221(a, p):
    return 0, -a * a + 2 * p


def _row_331(a, p):
    return a, a * a - p


def _row_421(a, p):
    return 0, a * a - 2 * p


def _row_631(a, p):
    return -a, a * a - p


def _row_222(a, p):
    return 0, 2 * p


def _row_422(a, p):
    return 0, -2 * p


def _row_662(a, p):
    return 0, -p


def _row_1262(a, p):
    return 0, p


# (f_L, f_K, f_M) -> (a_{p,1}, a_{p,2}) as functions of a = a_p(E0).
# (6,6,1) has a sign ambiguity and no entry; it falls back to counting.
TABLE_ROWS = {
    (1, 1, 1): _row_111,
    (2, 1, 1): _row_211,
    (2, 2, 1): _row_221,
    (3, 3, 1): _row_331,
    (4, 2, 1): _row_421,
    (6, 3, 1): _row_631,
    (6, 6, 1): None,
    (2, 2, 2): _row_222,
    (4, 2, 2): _row_422,
    (6, 6, 2): _row_662,
    (12, 6, 2): _row_1262,
}

# no element of order 4 in Gal(L/Q) = S3 x C2^2, and f_M = 1 forces f_K <= 3
FAMILY_ROWS = frozenset(TABLE_ROWS) - {(4, 2, 1), (4, 2, 2), (12, 6, 2), (6, 6, 1)}


@dataclass(frozen=True)
class FrobeniusProfile:
    fL: int
    fK: int
    fM: int

    def __post_init__(self):
        if self.astuple() not in TABLE_ROWS:
            raise ValueError(f"{self.astuple()} is not a row of the residue-degree table")

    def astuple(self) -> tuple[int, int, int]:
        return (self.fL, self.fK, self.fM)

    def __str__(self):
        return "({},{},{})".format(*self.astuple())


@dataclass(frozen=True)
class EulerData:
    a1: int
    a2: int
    profile: FrobeniusProfile
    source: EulerSource
    p: int

    @property
    def a_p2(self) -> int:
        return self.a1 * self.a1 - self.a2

    def zeta_numerator(self) -> tuple[int, int, int, int, int]:
        """Coefficients of 1 + a1 t + a2 t^2 + p a1 t^3 + p^2 t^4."""
        p = self.p
        return (1, self.a1, self.a2, p * self.a1, p * p)


@dataclass(frozen=True)
class TwistKernel:
    d: int
    m: int
    verified_primes: tuple[int, ...] = ()
    survivors: tuple[int, ...] = ()

    def epsilon(self, p: int) -> int:
        return legendre(self.m, p)


@lru_cache(maxsize=None)
def ap_E0(p: int) -> int:
    return trace_ap(E0, p)


def _check_good(d: int, p: int) -> tuple[int, int]:
    d = _check_d(d)
    p = int(p)
    if p < 5 or not is_prime(p):
        raise UsageError(f"p={p} must be a prime >= 5")
    if (d * (d + 3)) % p == 0:
        raise BadPrime(f"p={p} divides d(d+3) for d={d}")
    return d, p


_ORDER = {SplitType.Split3: 1, SplitType.OneRoot: 2, SplitType.Irreducible: 3}


def residue_degrees(d: int, p: int) -> tuple[int, int]:
    """(f_K, f_M) at an unramified prime p >= 5."""
    d = _check_d(d)
    p = int(p)
    if p < 5 or not is_prime(p):
        raise UsageError(f"p={p} must be a prime >= 5")
    if (d * (d + 3)) % p == 0:
        raise Inapplicable(f"p={p} ramifies for d={d}")
    fM = 1 if p % 3 == 1 else 2
    order = _ORDER[cubic_split_type(build_gd(d), p)]
    return lcm(order, fM), fM


def frobenius_profile(d: int, p: int, kernel: TwistKernel) -> FrobeniusProfile:
    fK, fM = residue_degrees(d, p)
    fL = 2 * fK if fK % 2 == 1 and kernel.epsilon(p) == -1 else fK
    return FrobeniusProfile(fL, fK, fM)


def kernel_candidates(d: int) -> list[int]:
    """Square-free candidates for m, in preference order, without repeats.

    The first block is {-1} together with sf(-2(d^2-9)) times the K-units
    {+-1, +-3, +-d, +-3d}; the second repeats the twist by sf(-2(d+3)).
    """
    d = _check_d(d)
    units = [1, -1, 3, -3, d, -d, 3 * d, -3 * d]
    out: list[int] = []
    for base in (None, -2 * (d * d - 9), -2 * (d + 3)):
        block = [-1] if base is None else [squarefree_part(base * t) for t in units]
        for m in block:
            if m not in out:
                out.append(m)
    return out


def same_kernel_class(d: int, m1: int, m2: int) -> bool:
    """Whether m1/m2 is -3, d or -3d up to squares.

    At primes where f_K is odd both -3 and d are squares mod p, so such
    candidates can never be told apart by the table and define the same L.
    """
    q = squarefree_part(m1 * m2)
    return q in {squarefree_part(t) for t in (1, -3, d, -3 * d)}


@lru_cache(maxsize=4096)
def _int_model(d: int) -> tuple[int, ...]:
    return tuple(build_Fd_integral(d).integer_coeffs())


def _oracle_a1(d: int, p: int) -> int:
    return count_points(list(_int_model(d)), p, 1).count - p - 1


def _predict_a1(fK: int, fM: int, eps: int, a: int, p: int) -> int:
    fL = 2 * fK if fK % 2 == 1 and eps == -1 else fK
    return TABLE_ROWS[(fL, fK, fM)](a, p)[0]


@lru_cache(maxsize=65536)
def infer_twist_kernel(d: int, min_primes: int = 8, pmax: int = 2000) -> TwistKernel:
    """Find m with (m/p) = [f_L = f_K] by matching the table against counts.

    Informative primes are good p = 1 mod 3 with f_K odd and a_p(E0) != 0;
    elsewhere every candidate predicts the same a_{p,1}. Inference stops once
    at least ``min_primes`` informative primes were used and the surviving
    candidates form a single class under :func:`same_kernel_class`.
    """
    d = _check_d(d)
    alive = kernel_candidates(d)
    used: list[int] = []
    for p in primes_in(7, pmax):
        if p % 3 != 1 or (3 * d * (d + 3)) % p == 0:
            continue
        fK, fM = residue_degrees(d, p)
        a = ap_E0(p)
        if fK % 2 == 0 or a == 0:
            continue
        truth = _oracle_a1(d, p)
        alive = [m for m in alive if _predict_a1(fK, fM, legendre(m, p), a, p) == truth]
        used.append(p)
        if not alive:
            raise InferenceAmbiguous(f"d={d}: no candidate survives at p={p}")
        if len(used) >= min_primes and all(same_kernel_class(d, alive[0], m) for m in alive):
            return TwistKernel(d, alive[0], tuple(used), tuple(alive))
    raise InferenceAmbiguous(
        f"d={d}: survivors {alive} not separated by {len(used)} primes up to {pmax}"
    )


def rule_kernel(d: int) -> TwistKernel:
    """The kernel sf(-2(d+3)) that inference selects for every d tested.

    Only the class of m matters; use this where inferring per d is too slow
    and cross-check it against :func:`infer_twist_kernel` on a range of d.
    """
    d = _check_d(d)
    return TwistKernel(d, squarefree_part(-2 * (d + 3)))


def euler_factor_good(
    d: int, p: int, kernel: TwistKernel | None = None, *, oracle: bool = False
) -> EulerData:
    """(a_{p,1}, a_{p,2}) at a good prime, from the table unless ``oracle``."""
    d, p = _check_good(d, p)
    if kernel is None:
        kernel = infer_twist_kernel(d)
    profile = frobenius_profile(d, p, kernel)
    row = TABLE_ROWS[profile.astuple()]
    if oracle or row is None:
        if row is None:
            log.warning("d=%d p=%d: row %s needs the oracle", d, p, profile)
        a1, a2 = genus2_a1a2(list(_int_model(d)), p)
        return EulerData(a1, a2, profile, EulerSource.Oracle, p)
    a1, a2 = row(ap_E0(p), p)
    return EulerData(a1, a2, profile, EulerSource.FastTable, p)


def lambda_p(d: int, p: int, kernel: TwistKernel | None = None) -> float:
    e = euler_factor_good(d, p, kernel)
    return -e.a1 / math.sqrt(p)


def lambda_p2(d: int, p: int, kernel: TwistKernel | None = None) -> float:
    e = euler_factor_good(d, p, kernel)
    return e.a_p2 / p


class BadKind(enum.Enum):
    Zero = "Zero"
    OmittedBounded = "OmittedBounded"


@dataclass(frozen=True)
class BadLambda:
    kind: BadKind
    bound: float | None = None
    flag: str | None = None


def bad_prime_lambda(d: int, p: int) -> BadLambda:
    d = _check_d(d)
    p = int(p)
    if p < 5 or not is_prime(p):
        raise UsageError(f"p={p} must be a prime >= 5")
    if (d * (d + 3)) % p:
        raise UsageError(f"p={p} is a good prime for d={d}")
    if d % p == 0:
        return BadLambda(BadKind.OmittedBounded, 2.0)
    if valuation(d + 3, p) >= 6:
        return BadLambda(BadKind.OmittedBounded, 2.0, "p^6 | d+3")
    return BadLambda(BadKind.Zero)


def verify_fd_split_consistency(d: int, p: int) -> bool:
    """f_d has six distinct roots on P^1(F_p) iff g_d splits and 3 is a square.

    When p | d-3 the reduction has degree 5 and infinity is the sixth root.
    """
    d, p = _check_good(d, p)
    red = reduce_mod_p(build_fd(d), p)
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(red):
        acc = (acc * xs + c) % p
    roots = int(np.count_nonzero(acc == 0)) + (6 - (len(red) - 1))
    lhs = roots == 6
    rhs = cubic_split_type(build_gd(d), p) is SplitType.Split3 and legendre(3, p) == 1
    return lhs == rhs


# residue-class view: everything below depends on d only through d mod p


@lru_cache(maxsize=64)
def residue_fK(p: int) -> np.ndarray:
    """f_K for each residue d mod p; 0 marks the ramified classes d = 0, -3."""
    roots = _kernels.gd_root_counts(p)
    fM = 1 if p % 3 == 1 else 2
    out = np.zeros(p, dtype=np.int8)
    for count, order in ((3, 1), (1, 2), (0, 3)):
        out[roots == count] = lcm(order, fM)
    out.setflags(write=False)
    return out


def a_p2_from_profile(fK: int, fM: int, a: int, p: int) -> int:
    """a_{p,1}^2 - a_{p,2}; the same for both f_L choices of a row."""
    a1, a2 = TABLE_ROWS[(fK, fK, fM)](a, p)
    return a1 * a1 - a2

