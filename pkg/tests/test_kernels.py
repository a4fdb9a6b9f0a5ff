import math

import numpy as np
import pytest

from twistlab import _kernels
from twistlab.arith import primes_in
from twistlab.conductor import conductor_known_part
from twistlab.ffcount import char_sum, cubic_split_type, legendre
from twistlab.family import build_gd
from twistlab.frobdata import a_p2_from_profile, ap_E0, residue_fK, rule_kernel, euler_factor_good
from twistlab.stats import squarefree_enum

PRIMES = primes_in(5, 400)


def rep(r, p):
    """A representative of r mod p that avoids the excluded d = 3."""
    return r if r != 3 else r + p


@pytest.mark.parametrize("p", PRIMES[:20])
def test_chi_table(p):
    chi = _kernels.chi_table(p)
    assert [int(c) for c in chi] == [legendre(x, p) for x in range(p)]


def test_e0_char_sum():
    for p in PRIMES:
        assert _kernels.e0_char_sum(p, _kernels.chi_table(p)) == char_sum([1, 0, 0, 1], p)


def test_rs_char_sums():
    polys = ([1, 0, 0, 1], [0, -3, 0, 1], [0, 18, 0, -2], [0, 18, 0, -42, 0, 24])
    for p in primes_in(5, 1200):
        if p % 4 != 1:
            continue
        got = _kernels.rs_char_sums(p, _kernels.chi_table(p))
        assert tuple(int(g) for g in got) == tuple(char_sum(f, p) for f in polys)


def test_mulmod_near_limit():
    p = 16777213
    rng = np.random.default_rng(1)
    xs = rng.integers(0, p, 2000)
    ys = rng.integers(0, p, 2000)
    for x, y in zip(xs, ys):
        assert _kernels.mulmod(int(x), int(y), p, 1.0 / p) == int(x) * int(y) % p
    assert _kernels.mulmod(p - 1, p - 1, p, 1.0 / p) == 1


@pytest.mark.parametrize("p", [5, 7, 101, 7919])
def test_inverse_table(p):
    inv = _kernels.inverse_table(p)
    assert inv[0] == 0
    assert all(i * int(inv[i]) % p == 1 for i in range(1, p))


@pytest.mark.parametrize("p", PRIMES[:25])
def test_gd_root_counts(p):
    roots = _kernels.gd_root_counts(p)
    assert roots[0] == -1 and roots[p - 3] == -1
    want = {"Split3": 3, "OneRoot": 1, "Irreducible": 0}
    for r in range(1, p):
        if (r + 3) % p:
            assert roots[r] == want[cubic_split_type(build_gd(rep(r, p)), p).name]


@pytest.mark.parametrize("p", PRIMES)
def test_a1_and_ap2_tables(p):
    a = ap_E0(p)
    a1 = _kernels.a1_table(p, a, _kernels.chi_table(p))
    ap2 = _kernels.ap2_table(p, a)
    fK = residue_fK(p)
    fM = 1 if p % 3 == 1 else 2
    for r in range(p):
        if fK[r] == 0:
            assert a1[r] == 0 and ap2[r] == 0
            continue
        assert ap2[r] == a_p2_from_profile(int(fK[r]), fM, a, p)
        if p % 3 == 1:
            d = rep(r, p)
            assert a1[r] == euler_factor_good(d, p, rule_kernel(d)).a1


def test_spf_sieve():
    spf = _kernels.spf_sieve(1000)
    assert spf[0] == spf[1] == 0
    for n in range(2, 1000):
        q = int(spf[n])
        assert n % q == 0 and all(q % k for k in range(2, math.isqrt(q) + 1))
        assert all(n % k for k in range(2, q))


def test_log_known_conductor():
    ds = np.array([d for d in squarefree_enum(3000)], dtype=np.int64)
    got = _kernels.log_known_conductor(ds, _kernels.spf_sieve(3010))
    want = [conductor_known_part(int(d)).log() for d in ds]
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


def test_residue_dot_and_count_multiples():
    members = np.array([1, 2, 5, 6, 7, 10, 11, 13], dtype=np.int64)
    table = np.arange(7, dtype=np.int64) ** 2
    assert _kernels.residue_dot(members, 7, table) == sum(int(table[m % 7]) for m in members)
    assert _kernels.count_multiples(members, 5, 0) == 2
    assert _kernels.count_multiples(members, 5, 3) == sum(1 for m in members if (m + 3) % 5 == 0)
