"""Small integer helpers: prime lists, valuations, square-free parts."""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory.residue_ntheory import sqrt_mod

__all__ = [
    "is_prime",
    "primes_upto",
    "primes_in",
    "valuation",
    "squarefree_part",
    "is_squarefree",
    "sqrt_mod_p",
    "inv_mod",
]


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(int(n)))


@lru_cache(maxsize=8)
def _sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, isqrt(n) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags)


def primes_upto(n: float) -> np.ndarray:
    """All primes <= n as an int64 array."""
    n = int(np.floor(n))
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    # round the sieve size up so nearby calls share one cached sieve
    size = max(1024, 1 << (n - 1).bit_length())
    ps = _sieve(size)
    return ps[: np.searchsorted(ps, n, side="right")].astype(np.int64)


def primes_in(lo: float, hi: float) -> list[int]:
    """Primes p with lo <= p <= hi, as Python ints."""
    ps = primes_upto(hi)
    return [int(p) for p in ps[ps >= lo]]


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def squarefree_part(n: int) -> int:
    """Signed square-free kernel: n = squarefree_part(n) * k**2."""
    if n == 0:
        raise ValueError("0 has no square-free part")
    out = -1 if n < 0 else 1
    for q, e in factorint(abs(n)).items():
        if e % 2:
            out *= q
    return out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def sqrt_mod_p(a: int, p: int) -> int | None:
    """Smallest square root of a mod p, or None for a non-residue."""
    a %= p
    if a == 0:
        return 0
    r = sqrt_mod(a, p)
    return None if r is None else int(r)


def inv_mod(a: int, p: int) -> int:
    return pow(a, -1, p)
