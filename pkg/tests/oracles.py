"""Slow reference implementations used only by the tests.

Nothing here calls the fast paths: Euler data come from raw point counts on
(d+3)^2 f_d, square-freeness from sympy, and the test function is written
out again from its closed form.
"""

from math import fsum, log

from sympy import factorint, isprime

from twistlab.family import build_Fd_integral
from twistlab.ffcount import count_points, genus2_a1a2


def squarefree_below(X):
    return [d for d in range(1, int(X) + 1) if d < X and d != 3
            and all(e == 1 for e in factorint(d).values())]


def phihat(sigma, u):
    return max(sigma - abs(u), 0.0) / 4


def density_double_loop(X, sigma):
    """(S1, S2) summed term by term over (d, p), oracle counts only."""
    ds = squarefree_below(X)
    L = log(X)
    s1, s2 = [], []
    for d in ds:
        F = build_Fd_integral(d).integer_coeffs()
        for p in range(5, int(X**sigma) + 2):
            if not isprime(p) or (d * (d + 3)) % p == 0:
                continue
            w1 = phihat(sigma, log(p) / L)
            w2 = phihat(sigma, 2 * log(p) / L)
            if w1 > 0:
                a1 = count_points(F, p, 1).count - p - 1
                s1.append(-a1 * log(p) / p * w1)
            if w2 > 0:
                a1, a2 = genus2_a1a2(F, p)
                s2.append((a1 * a1 - a2) * log(p) / p**2 * w2)
    norm = 2.0 / (len(ds) * L)
    return norm * fsum(s1), norm * fsum(s2)
