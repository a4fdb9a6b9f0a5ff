"""Compiled O(p) loops for sweeps over many primes.

These are the fast paths behind the density and statistics modules. Each one
is cross-checked in the test suite against the enumeration oracle in
:mod:`twistlab.ffcount`, which shares no code with this file.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def chi_table(p):
    chi = np.full(p, -1, dtype=np.int8)
    chi[0] = 0
    for x in range(1, (p - 1) // 2 + 1):
        chi[x * x % p] = 1
    return chi


@njit(cache=True)
def e0_char_sum(p, chi):
    """Sum of chi(t^3 + 1) over F_p, with t^3 updated incrementally."""
    total = 0
    s = 0  # t^2
    c = 0  # t^3
    for t in range(p):
        v = c + 1
        if v >= p:
            v -= p
        total += chi[v]
        # (t+1)^3 = t^3 + 3t^2 + 3t + 1
        c = (c + 3 * s + 3 * t + 1) % p
        s += 2 * t + 1
        while s >= p:
            s -= p
    return total


@njit(cache=True)
def rs_char_sums(p, chi):
    """Character sums of x^3+1, x^3-3x, -2x^3+18x and 24x^5-42x^3+18x over F_p.

    Needs p = 1 mod 4. Then chi(-1) = 1, so t and -t give equal terms in the
    three odd polynomials, and t = 1..(p-1)/2 covers everything: x^3+1 is
    read at t and at -t in the same pass. The odd polynomials are written as
    x*(...) with the bracket a polynomial in s = t^2.
    """
    s_e0 = chi[1]
    s_e1 = 0
    s_e2 = 0
    s_c1 = 0
    s = 0  # t^2
    c = 0  # t^3
    for t in range(1, (p - 1) // 2 + 1):
        # t^3 = (t-1)^3 + 3(t-1)^2 + 3(t-1) + 1
        c += 3 * s + 3 * t - 2
        while c >= p:
            c -= p
        s += 2 * t - 1
        if s >= p:
            s -= p
        v = c + 1
        if v >= p:
            v -= p
        w = p + 1 - c
        if w >= p:
            w -= p
        s_e0 += chi[v] + chi[w]
        a = s - 3
        if a < 0:
            a += p
        b = s - 9
        if b < 0:
            b += p
        q = 4 * s - 3
        if q < 0:
            q += p
        while q >= p:
            q -= p
        r = s - 1
        if r < 0:
            r += p
        ct = chi[t]
        s_e1 += ct * chi[a]
        s_e2 += ct * chi[b]
        s_c1 += ct * chi[q] * chi[r]
    return s_e0, 2 * s_e1, 2 * chi[p - 2] * s_e2, 2 * chi[6 % p] * s_c1


@njit(cache=True)
def mulmod(x, y, p, pinv):
    """x*y mod p for 0 <= x, y < p < 2^26, with pinv = 1.0/p (Barrett style)."""
    z = x * y
    q = np.int64(z * pinv)
    r = z - q * p
    if r < 0:
        r += p
    elif r >= p:
        r -= p
    return r


@njit(cache=True)
def inverse_table(p):
    """inv[i] = i^-1 mod p, from factorials and Wilson's (p-1)! = -1."""
    pinv = 1.0 / p
    fact = np.empty(p, dtype=np.int64)
    fact[0] = 1
    for i in range(1, p):
        fact[i] = mulmod(fact[i - 1], i, p, pinv)
    inv = np.zeros(p, dtype=np.int64)
    inv_fact = p - 1  # 1/(p-1)! = -1
    for i in range(p - 1, 0, -1):
        # 1/i = (i-1)! / i!
        inv[i] = mulmod(fact[i - 1], inv_fact, p, pinv)
        inv_fact = mulmod(inv_fact, i, p, pinv)
    return inv


@njit(cache=True)
def gd_root_counts(p):
    """Number of roots of g_d in F_p for every residue d; -1 marks d = 0, -3.

    Uses g_d(t) = 0 iff 4t^3 - 3t = (d-3)/(d+3).
    """
    per_kappa = np.zeros(p, dtype=np.int64)
    s = 0  # t^2
    c = 0  # t^3
    for t in range(p):
        k = 4 * c - 3 * t
        while k < 0:
            k += p
        while k >= p:
            k -= p
        per_kappa[k] += 1
        c += 3 * s + 3 * t + 1
        while c >= p:
            c -= p
        s += 2 * t + 1
        while s >= p:
            s -= p
    inv = inverse_table(p)
    pinv = 1.0 / p
    out = np.full(p, -1, dtype=np.int8)
    for d in range(1, p):
        if d == p - 3:
            continue
        num = d - 3
        if num < 0:
            num += p
        den = d + 3
        if den >= p:
            den -= p
        out[d] = per_kappa[mulmod(num, inv[den], p, pinv)]
    return out


@njit(cache=True)
def spf_sieve(n):
    """Smallest prime factor of every k < n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n, dtype=np.int64)
    for i in range(2, n):
        if spf[i] == 0:
            for j in range(i, n, i):
                if spf[j] == 0:
                    spf[j] = i
    return spf


@njit(cache=True)
def log_known_conductor(ds, spf):
    """log of the prime-to-6 conductor for square-free d > 0.

    Exponent 2 at p | d, and 4 at p | d+3 unless 6 | ord_p(d+3).
    """
    out = np.zeros(len(ds), dtype=np.float64)
    for i in range(len(ds)):
        total = 0.0
        for n0, weight in ((ds[i], 2), (ds[i] + 3, 4)):
            n = n0
            while n > 1:
                q = spf[n]
                k = 0
                while n % q == 0:
                    n //= q
                    k += 1
                if q >= 5 and (weight == 2 or k % 6 != 0):
                    total += weight * np.log(q)
        out[i] = total
    return out


@njit(cache=True)
def residue_dot(members, p, table):
    """Sum of table[d mod p] over d in members, in member order."""
    total = 0
    for i in range(len(members)):
        total += table[members[i] % p]
    return total


@njit(cache=True)
def a1_table(p, a, chi):
    """a_{p,1} for each residue d at p = 1 mod 3; zero on d = 0, -3.

    Split g_d gives -2a or 2a and irreducible g_d gives a or -a, the sign
    set by chi(-2(d+3)); one root (f_K = 2) gives 0.
    """
    roots = gd_root_counts(p)
    out = np.zeros(p, dtype=np.int64)
    v = (p - 6 % p) % p  # -2(d+3) mod p at d = 0
    for d in range(p):
        r = roots[d]
        if r == 3 or r == 0:
            out[d] = (-2 * a if r == 3 else a) * chi[v]
        v -= 2
        if v < 0:
            v += p
    return out


@njit(cache=True)
def ap2_table(p, a):
    """a_{p,1}^2 - a_{p,2} for each residue d; zero on d = 0, -3."""
    roots = gd_root_counts(p)
    out = np.zeros(p, dtype=np.int64)
    one_mod_3 = p % 3 == 1
    for d in range(p):
        r = roots[d]
        if r < 0:
            continue
        if r == 0:
            out[d] = p
        elif not one_mod_3:
            out[d] = -2 * p
        elif r == 3:
            out[d] = 3 * a * a - 2 * p
        else:
            out[d] = a * a - 2 * p
    return out


@njit(cache=True)
def count_multiples(members, q, shift):
    """#{d in members : q | d + shift}."""
    n = 0
    for i in range(len(members)):
        if (members[i] + shift) % q == 0:
            n += 1
    return n
