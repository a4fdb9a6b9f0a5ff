from fractions import Fraction

import numpy as np
import pytest

from twistlab.arith import primes_in
from twistlab.errors import DomainError, UsageError
from twistlab.family import build_gd
from twistlab.ffcount import SplitType, cubic_split_type, legendre
from twistlab.stats import (
    TABLE2_FROZEN_BOUND,
    gd_split_counts,
    sieve_check,
    squarefree_enum,
    squarefree_mask,
    table1,
    table2,
)


def test_squarefree_enum():
    S = squarefree_enum(100)
    assert len(S) == 60
    assert 3 not in list(S) and 1 in list(S) and 4 not in list(S)
    assert list(squarefree_enum(2)) == [1]
    assert list(squarefree_enum(7.5)) == [1, 2, 5, 6, 7]
    with pytest.raises(UsageError):
        squarefree_enum(1)


def test_squarefree_density():
    n = 10**6
    ratio = squarefree_mask(n).sum() / n
    assert abs(ratio - 6 / np.pi**2) < 1e-3


def brute_table(p):
    rows = {}
    for d in range(1, p):
        if (d + 3) % p == 0:
            continue
        dd = d if d != 3 else d + p
        key = (legendre(d, p), cubic_split_type(build_gd(dd), p))
        rows[key] = rows.get(key, 0) + 1
    return rows


@pytest.mark.parametrize("p,want", [(7, (0, 2, 3)), (5, (0, 2, 1)), (13, (1, 4, 6))])
def test_table1_examples(p, want):
    assert tuple(r.measured for r in table1(p)) == want


def test_table1_against_brute_force():
    for p in primes_in(5, 150):
        brute = brute_table(p)
        rows = table1(p)
        for r in rows:
            assert r.measured == brute.get((r.legendre_d, r.split), 0)
        assert sum(r.measured for r in rows) == p - 2
        assert all(r.deviation == 0 for r in rows)
    assert table1(7)[0].predicted == Fraction(0)


def test_table2_partition():
    for p in primes_in(5, 199):
        rows = table2(p)
        assert len(rows) == 6
        # only the class d = 3 falls outside the six rows
        assert sum(r.measured for r in rows) == p - 3
        for r in rows:
            assert abs(r.deviation) <= TABLE2_FROZEN_BOUND


def test_gd_split_counts_codes():
    roots = gd_split_counts(11)
    assert roots[0] == -1 and roots[8] == -1
    assert set(roots[roots >= 0]) <= {s.value for s in SplitType}


def test_sieve():
    s = sieve_check(5, [1, 6], 1e4)
    assert s.A == (1,)
    S = list(squarefree_enum(1e4))
    assert s.size == len(S)
    assert s.measured == sum(1 for d in S if d % 5 == 1)
    assert s.predicted_minus > s.predicted_plus
    assert s.better in ("minus", "plus")
    assert s.constant >= 0
    with pytest.raises(DomainError):
        sieve_check(5, [0, 1], 100)
    with pytest.raises(UsageError):
        sieve_check(9, [1], 100)
