"""One-level density sums for the family and the average-rank upper bound.

With phi(x) = sin^2(pi sigma x) / (2 pi x)^2 and its transform
phihat(u) = (sigma - |u|)/4 on [-sigma, sigma], the explicit formula bounds
the average analytic rank over S(X) by

    phihat(0) <log N> / (phi(0) log X) - S1/phi(0) - S2/phi(0)

up to O(1/log X). S1 sums lambda_p over p <= X^sigma and S2 sums
lambda_{p^2} over p <= X^(sigma/2). Both are computed prime by prime: the
Euler data at a good p depend on d only through d mod p, so the inner sum
over d is an exact integer built from residue-class counts.

Skipped terms (p = 2, 3; p | d; p^6 | d+3) are bounded instead of computed
and collected in ``skipped_budget``, an absolute bound on their total
contribution to S1 + S2.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import fsum, log

import numpy as np

from . import _kernels
from .arith import primes_upto
from .conductor import WILD_CAPS
from .errors import DomainError, UsageError
from .frobdata import euler_factor_good, infer_twist_kernel, rule_kernel
from .stats import squarefree_enum

__all__ = [
    "TestFunction",
    "testfn",
    "SumResult",
    "DensityReport",
    "ap_E0_fast",
    "S1_sum",
    "S2_sum",
    "S1_terms",
    "S2_terms",
    "prime_sum_2mod3",
    "RSDecay",
    "rs_decay_checks",
    "RS_DECAY_BAND",
    "mean_log_conductor",
    "rank_bound",
    "asymptotic_bound",
    "format_float",
]

# |value| bound for each rs_decay sum at X = 1e6, sigma = 1 (frozen)
RS_DECAY_BAND = 0.2

# bound on |lambda_{p^k}| used for skipped terms
_WEIL = 4.0


def format_float(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class TestFunction:
    """The Fejer pair: phi >= 0 with phihat supported on [-sigma, sigma]."""

    sigma: float

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    @property
    def phi0(self) -> float:
        return self.sigma**2 / 4

    @property
    def phihat0(self) -> float:
        return self.sigma / 4

    def phi(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.sin(np.pi * self.sigma * x) ** 2 / (2 * np.pi * x) ** 2
        val = np.where(x == 0, self.phi0, val)
        return float(val) if val.ndim == 0 else val

    def phihat(self, u):
        u = np.asarray(u, dtype=float)
        val = np.maximum(self.sigma - np.abs(u), 0.0) / 4
        return float(val) if val.ndim == 0 else val

    eval_phi = phi
    eval_phihat = phihat


def testfn(sigma: float) -> TestFunction:
    return TestFunction(float(sigma))


@lru_cache(maxsize=None)
def ap_E0_fast(p: int) -> int:
    """a_p(x^3 + 1) from the compiled character sum."""
    return -int(_kernels.e0_char_sum(p, _kernels.chi_table(p)))


@dataclass(frozen=True)
class SumResult:
    value: float
    budget: float
    flags: tuple[str, ...] = ()


def _weights(X: float, tf: TestFunction, k: int):
    """(p, phihat(k log p / log X)) for primes with positive weight."""
    L = log(X)
    pmax = math.floor(X ** (tf.sigma / k) * (1 + 1e-12))
    out = []
    for p in primes_upto(pmax):
        w = tf.phihat(k * log(int(p)) / L)
        if w > 0:
            out.append((int(p), w))
    return out


def _bad_counts(members: np.ndarray, p: int, X: float) -> tuple[int, int]:
    """#{d : p | d} and #{d : p^6 | d+3}."""
    n_d = int(_kernels.count_multiples(members, p, 0))
    q = p**6
    n_6 = int(_kernels.count_multiples(members, q, 3)) if q <= X + 3 else 0
    return n_d, n_6


def _a1_table(p: int) -> np.ndarray:
    return _kernels.a1_table(p, ap_E0_fast(p), _kernels.chi_table(p))


def _ap2_table(p: int) -> np.ndarray:
    return _kernels.ap2_table(p, ap_E0_fast(p))


def _good_residue_sum(members: np.ndarray, p: int, table: np.ndarray) -> int:
    # tables are zero on the classes d = 0, -3 mod p, so bad d drop out
    assert table[0] == 0 and table[(-3) % p] == 0
    return int(_kernels.residue_dot(members, p, table))


def _per_d_inner(members, p, k, kernels) -> int:
    total = 0
    for d in members:
        d = int(d)
        if (d * (d + 3)) % p == 0:
            continue
        e = euler_factor_good(d, p, kernels(d))
        total += -e.a1 if k == 1 else e.a_p2
    return total


def _sum(X: float, sigma: float, k: int, method: str, kernel: str) -> SumResult:
    if X < 10:
        raise UsageError("X must be at least 10")
    tf = testfn(sigma)
    S = squarefree_enum(X)
    members = S.members
    n = len(members)
    L = log(X)
    if method not in ("residue", "per_d"):
        raise UsageError(f"unknown method {method!r}")
    kernels = {"infer": infer_twist_kernel, "rule": rule_kernel}[kernel]
    terms, skipped, flags = [], [], []
    for p, w in _weights(X, tf, k):
        scale = log(p) / p ** (k / 2) * w
        if p < 5:
            skipped.append(n * _WEIL * scale)
            continue
        n_d, n_6 = _bad_counts(members, p, X)
        skipped.append((n_d + n_6) * 2.0 * scale)
        if n_6:
            flags.append(f"p={p}: {n_6} d with p^6 | d+3 skipped")
        if k == 1 and p % 3 == 2:
            continue  # a_{p,1} = 0 at every good p = 2 mod 3
        if method == "residue":
            if k == 1:
                inner = -_good_residue_sum(members, p, _a1_table(p))
            else:
                inner = _good_residue_sum(members, p, _ap2_table(p))
        else:
            inner = _per_d_inner(members, p, k, kernels)
        # lambda_p log p / sqrt p = -a1 log p / p ; lambda_{p^2} log p / p = a_{p^2} log p / p^2
        terms.append(inner * (log(p) / p**k) * w)
    norm = 2.0 / (n * L)
    return SumResult(norm * fsum(terms), norm * fsum(skipped), tuple(flags))


def S1_terms(X: float, sigma: float, *, method: str = "residue", kernel: str = "rule") -> SumResult:
    return _sum(X, sigma, 1, method, kernel)


def S2_terms(X: float, sigma: float, *, method: str = "residue", kernel: str = "rule") -> SumResult:
    return _sum(X, sigma, 2, method, kernel)


def S1_sum(X: float, sigma: float, **kw) -> float:
    return S1_terms(X, sigma, **kw).value


def S2_sum(X: float, sigma: float, **kw) -> float:
    return S2_terms(X, sigma, **kw).value


def prime_sum_2mod3(X: float, sigma: float) -> float:
    """(2/log X) sum over p = 2 mod 3 of (log p / p) phihat(2 log p / log X)."""
    if X < 10:
        raise UsageError("X must be at least 10")
    tf = testfn(sigma)
    L = log(X)
    terms = [log(p) / p * w for p, w in _weights(X, tf, 2) if p % 3 == 2]
    return 2.0 / L * fsum(terms)


@dataclass(frozen=True)
class RSDecay:
    X: float
    sigma: float
    e0e1: float
    e0e2: float
    e0c1: float
    e0sq: float
    contrast: float

    def within(self, band: float = RS_DECAY_BAND) -> bool:
        return all(abs(v) <= band for v in (self.e0e1, self.e0e2, self.e0c1, self.e0sq))


def rs_decay_checks(X: float, sigma: float) -> RSDecay:
    """The weighted prime sums that make the S1 main term and S2 p = 1 mod 3 part vanish.

    a_p(E0) = 0 for p = 2 mod 3, and E1, E2, C1 are odd in x so their traces
    vanish for p = 3 mod 4; only p = 1 mod 12 contributes to the products.
    """
    if X < 10:
        raise UsageError("X must be at least 10")
    tf = testfn(sigma)
    L = log(X)
    e1, e2, c1 = [], [], []
    for p, w in _weights(X, tf, 1):
        if p < 5 or p % 12 != 1:
            continue
        s0, s1, s2, s3 = _kernels.rs_char_sums(p, _kernels.chi_table(p))
        wt = log(p) / p**2 * w
        # each trace is minus its character sum
        e1.append(wt * s0 * s1)
        e2.append(wt * s0 * s2)
        c1.append(wt * s0 * s3)
    sq, contrast = [], []
    for p, w in _weights(X, tf, 2):
        if p < 5:
            continue
        wt = log(p) / p**2 * w
        if p % 3 == 1:
            sq.append(wt * (ap_E0_fast(p) ** 2 - 2 * p))
        else:
            contrast.append(wt * (-2 * p))
    return RSDecay(
        X, sigma, fsum(e1) / L, fsum(e2) / L, fsum(c1) / L, fsum(sq) / L, fsum(contrast) / L
    )


def mean_log_conductor(X: float) -> tuple[float, float]:
    """Mean over S(X) of the low and high log-conductor brackets."""
    S = squarefree_enum(X)
    spf = _spf(int(S.members[-1]) + 4)
    logs = _kernels.log_known_conductor(S.members, spf)
    low = fsum(logs.tolist()) / len(S)
    return low, low + WILD_CAPS[2] * log(2) + WILD_CAPS[3] * log(3)


@lru_cache(maxsize=2)
def _spf(n: int) -> np.ndarray:
    return _kernels.spf_sieve(max(n, 16))


@dataclass(frozen=True)
class DensityReport:
    X: float
    sigma: float
    S1: float
    S2: float
    meanlogN_low: float
    meanlogN_high: float
    bound_low: float
    bound_high: float
    skipped_budget: float
    flags: tuple[str, ...] = field(default=())

    @property
    def phi0(self) -> float:
        return testfn(self.sigma).phi0

    def to_dict(self) -> dict:
        keys = ("X", "sigma", "S1", "S2", "meanlogN_low", "meanlogN_high",
                "bound_low", "bound_high", "skipped_budget")
        out = {k: getattr(self, k) for k in keys}
        out["S2_over_phi0"] = self.S2 / self.phi0
        return out

    def to_json(self) -> str:
        body = ",\n".join(
            f"  {json.dumps(k)}: {format_float(v)}" for k, v in self.to_dict().items()
        )
        return "{\n" + body + "\n}\n"

    def csv_row(self) -> str:
        return ",".join(format_float(v) for v in (self.X, self.sigma, self.S1, self.S2, self.bound_high))


CSV_SERIES_HEADER = "X,sigma,S1,S2,bound_high"


def rank_bound(X: float, sigma: float, *, kernel: str = "rule") -> DensityReport:
    tf = testfn(sigma)
    flags = []
    if sigma >= 1 / 3:
        msg = f"sigma={sigma} is outside sigma < 1/3, where the bound is proved"
        warnings.warn(msg, stacklevel=2)
        flags.append(msg)
    s1 = S1_terms(X, sigma, kernel=kernel)
    s2 = S2_terms(X, sigma, kernel=kernel)
    low, high = mean_log_conductor(X)
    L = log(X)
    budget = s1.budget + s2.budget
    core = -(s1.value + s2.value) / tf.phi0
    cond = tf.phihat0 / (tf.phi0 * L)
    return DensityReport(
        float(X),
        float(sigma),
        s1.value,
        s2.value,
        low,
        high,
        cond * low + core - budget / tf.phi0,
        cond * high + core + budget / tf.phi0,
        budget,
        tuple(dict.fromkeys(tuple(flags) + s1.flags + s2.flags)),
    )


def asymptotic_bound(sigma: float) -> float:
    """1/4 + 6/sigma."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return 0.25 + 6.0 / sigma
