"""Square-free sieves and the two counting tables over F_p.

Both tables classify d in F_p \\ {0, -3} by the splitting of g_d. Root counts
come from one pass over t in F_p: g_d(t) = 0 exactly when 4t^3 - 3t equals
kappa_d = (d-3)/(d+3), and d -> kappa_d is a bijection onto F_p \\ {1, -1}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from . import _kernels
from .errors import DomainError, UsageError
from .family import C1, E1, E2
from .ffcount import SplitType, _chi_table, check_prime, genus2_a1a2, trace_ap

log = logging.getLogger(__name__)

__all__ = [
    "SquarefreeSet",
    "Table1Row",
    "Table2Row",
    "SieveCheck",
    "squarefree_mask",
    "squarefree_enum",
    "gd_split_counts",
    "table1",
    "table2",
    "TABLE2_FROZEN_BOUND",
    "sieve_check",
]

# max |measured - main term| over 5 <= p <= 199 was 1.75 when first swept
TABLE2_FROZEN_BOUND = 2.0


def squarefree_mask(n: int) -> np.ndarray:
    """Boolean array m with m[k] True iff k is square-free, for 0 <= k < n."""
    mask = np.ones(max(n, 1), dtype=bool)
    mask[0] = False
    for q in range(2, isqrt(max(n - 1, 0)) + 1):
        mask[q * q :: q * q] = False
    return mask


@dataclass(frozen=True)
class SquarefreeSet:
    X: float
    members: np.ndarray

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return (int(d) for d in self.members)


def squarefree_enum(X: float) -> SquarefreeSet:
    """Square-free d with 0 < d < X, minus d = 3 where C_d is undefined."""
    if X < 2:
        raise UsageError("X must be at least 2")
    n = math.ceil(X)
    ds = np.flatnonzero(squarefree_mask(n)).astype(np.int64)
    ds = ds[ds < X]
    if 3 in ds:
        log.debug("dropping d=3 from S(%s)", X)
        ds = ds[ds != 3]
    ds.setflags(write=False)
    return SquarefreeSet(X, ds)


_SPLIT_OF_COUNT = {3: SplitType.Split3, 1: SplitType.OneRoot, 0: SplitType.Irreducible}


def gd_split_counts(p: int) -> np.ndarray:
    """Roots of g_d in F_p for each residue d; -1 at d = 0, -3."""
    return _kernels.gd_root_counts(check_prime(p))


@dataclass(frozen=True)
class Table1Row:
    p: int
    p_mod3: int
    legendre_d: int
    split: SplitType
    measured: int
    predicted: Fraction

    @property
    def deviation(self) -> Fraction:
        return self.measured - self.predicted

    @property
    def label(self) -> str:
        return f"{self.p_mod3}|{self.legendre_d:+d}|{self.split.name}"


_T1 = {
    1: ((SplitType.Split3, 1, -7, 6), (SplitType.Irreducible, 1, -1, 3), (SplitType.OneRoot, -1, -1, 2)),
    2: ((SplitType.Split3, 1, -5, 6), (SplitType.Irreducible, 1, 1, 3), (SplitType.OneRoot, -1, -3, 2)),
}


def _classify(p: int):
    roots = gd_split_counts(p)
    chi = _chi_table(p)
    ds = np.arange(p)
    keep = roots >= 0
    return ds[keep], roots[keep], chi[ds[keep]]


def table1(p: int) -> list[Table1Row]:
    """The three rows for p's class mod 3: split completely, irreducible, 1+2.

    Rows also check that each split type sits in the predicted Legendre
    class; a d landing elsewhere would make the counts disagree.
    """
    p = check_prime(p)
    _, roots, chi = _classify(p)
    rows = []
    for split, leg, num, den in _T1[p % 3]:
        measured = int(np.count_nonzero((roots == split.value) & (chi == leg)))
        rows.append(Table1Row(p, p % 3, leg, split, measured, Fraction(p + num, den)))
    return rows


@dataclass(frozen=True)
class Table2Row:
    p: int
    legendre_d: int
    legendre_m: int
    split: SplitType
    measured: int
    predicted: Fraction

    @property
    def deviation(self) -> Fraction:
        return self.measured - self.predicted

    @property
    def label(self) -> str:
        return f"{self.legendre_d:+d}|{self.legendre_m:+d}|{self.split.name}"


def table2(p: int) -> list[Table2Row]:
    """Counts refined by (-2(d^2-9) / p), with main terms from E1, E2, C1.

    The class d = 3 mod p makes -2(d^2-9) vanish and belongs to no row.
    """
    p = check_prime(p)
    ds, roots, chi = _classify(p)
    chi_m = _chi_table(p)[(-2 * (ds * ds - 9)) % p]
    e1 = trace_ap(E1, p)
    e2 = trace_ap(E2, p)
    c1 = -genus2_a1a2(C1, p)[0]
    F = Fraction
    main = {
        (1, 1, SplitType.Split3): F(p - e1 - c1, 12),
        (1, -1, SplitType.Split3): F(p + e1 + c1, 12),
        (1, 1, SplitType.Irreducible): F(p, 6) - F(e2, 4) + F(e1, 12) + F(c1, 12),
        (1, -1, SplitType.Irreducible): F(p, 6) + F(e2, 4) - F(e1, 12) - F(c1, 12),
        (-1, 1, SplitType.OneRoot): F(p, 4) + F(e2, 4),
        (-1, -1, SplitType.OneRoot): F(p, 4) - F(e2, 4),
    }
    rows = []
    for (ld, lm, split), pred in main.items():
        hit = (chi == ld) & (chi_m == lm) & (roots == split.value)
        rows.append(Table2Row(p, ld, lm, split, int(np.count_nonzero(hit)), pred))
    return rows


@dataclass(frozen=True)
class SieveCheck:
    p: int
    A: tuple[int, ...]
    X: float
    size: int
    measured: int
    predicted_minus: float
    predicted_plus: float

    @property
    def deviation_minus(self) -> float:
        return self.measured - self.predicted_minus

    @property
    def deviation_plus(self) -> float:
        return self.measured - self.predicted_plus

    @property
    def better(self) -> str:
        """'minus' for 1/(1-p^-2), 'plus' for 1/(1+p^-2)."""
        return "minus" if abs(self.deviation_minus) < abs(self.deviation_plus) else "plus"

    @property
    def constant(self) -> float:
        """|best deviation| / ((1+|A|) sqrt X)."""
        best = min(abs(self.deviation_minus), abs(self.deviation_plus))
        return best / ((1 + len(self.A)) * math.sqrt(self.X))


def sieve_check(p: int, A, X: float) -> SieveCheck:
    p = check_prime(p)
    A = tuple(sorted({int(a) % p for a in A}))
    if 0 in A:
        raise DomainError("A must lie in the units of F_p")
    S = squarefree_enum(X)
    hit = np.isin(S.members % p, A)
    base = len(A) / p * len(S)
    return SieveCheck(
        p,
        A,
        X,
        len(S),
        int(np.count_nonzero(hit)),
        base / (1 - p**-2),
        base / (1 + p**-2),
    )
