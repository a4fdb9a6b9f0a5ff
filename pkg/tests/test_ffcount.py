import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import legendre_symbol

from twistlab.arith import primes_in
from twistlab.errors import DegenerateModel, NotReducible, UsageError
from twistlab.family import build_Fd_integral, build_gd
from twistlab.ffcount import (
    FpElem,
    QuadExtElem,
    SplitType,
    char_sum,
    count_points,
    cubic_split_type,
    genus2_a1a2,
    legendre,
    smallest_nonresidue,
    trace_ap,
)

PRIMES = primes_in(5, 199)


def naive_count(F, p):
    """Affine solutions of y^2 = F(x) by trying every (x, y)."""
    sq = {}
    for y in range(p):
        sq[y * y % p] = sq.get(y * y % p, 0) + 1
    return sum(sq.get(sum(c * pow(x, i, p) for i, c in enumerate(F)) % p, 0) for x in range(p))


@pytest.mark.parametrize("a,p,want", [(2, 7, 1), (0, 5, 0), (2, 5, -1)])
def test_legendre_examples(a, p, want):
    assert legendre(a, p) == want


@pytest.mark.parametrize("p", [1, 2, 9, 15])
def test_legendre_rejects_bad_modulus(p):
    with pytest.raises(UsageError):
        legendre(3, p)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from(PRIMES))
def test_legendre_multiplicative_and_periodic(a, b, p):
    assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)
    assert legendre(a + p, p) == legendre(a, p)
    assert legendre(a, p) == legendre_symbol(a % p, p)


def test_char_sum_examples():
    assert char_sum([-1, 0, 1], 7) == -1
    assert char_sum([1, 0, 0, 1], 5) == 0
    assert char_sum([4], 11) == 11


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=7), st.sampled_from(PRIMES[:15]))
def test_char_sum_matches_direct_loop(coeffs, p):
    direct = sum(legendre(sum(c * x**i for i, c in enumerate(coeffs)), p) for x in range(p))
    assert char_sum(coeffs, p) == direct


def test_count_points_examples():
    assert count_points([1, 0, 0, 1], 5).count == 6
    assert count_points([1, 0, 0, 1], 7).count == 12
    with pytest.raises(DegenerateModel):
        count_points([0, 0, 1, 1], 7)  # x^3 + x^2 is singular at 0
    with pytest.raises(DegenerateModel):
        count_points([1, 0, 1], 7)


@pytest.mark.parametrize("d", [1, 2, 5, 7, 10])
def test_count_points_against_naive(d):
    F = build_Fd_integral(d).integer_coeffs()
    for p in primes_in(5, 61):
        if (d * (d + 3)) % p == 0:
            continue
        red = [c % p for c in F]
        deg = max(i for i, c in enumerate(red) if c)
        inf = 1 + legendre(red[6], p) if deg == 6 else 1
        assert count_points(F, p).count == naive_count(F, p) + inf


def test_trace_examples():
    assert trace_ap([1, 0, 0, 1], 5) == 0
    assert trace_ap([1, 0, 0, 1], 7) == -4
    assert trace_ap([0, -3, 0, 1], 5) == 4


def test_supersingular_E0():
    assert all(trace_ap([1, 0, 0, 1], p) == 0 for p in primes_in(5, 10_000) if p % 3 == 2)


def test_trace_is_minus_char_sum():
    for p in PRIMES:
        assert trace_ap([1, 0, 0, 1], p) == -char_sum([1, 0, 0, 1], p)
        assert abs(trace_ap([1, 0, 0, 1], p)) <= 2 * p**0.5


def test_weil_bounds_and_integrality():
    for d in range(1, 51):
        if d == 3:
            continue
        F = build_Fd_integral(d).integer_coeffs()
        for p in primes_in(5, 199):
            if (d * (d + 3)) % p == 0:
                continue
            n = count_points(F, p).count
            assert abs(n - p - 1) <= 4 * p**0.5
            if p <= 61:
                a1, a2 = genus2_a1a2(F, p)  # raises if a2 is not integral
                assert abs(a2) <= 6 * p


def test_genus2_small_case():
    a1, a2 = genus2_a1a2(build_Fd_integral(1).integer_coeffs(), 7)
    assert abs(a1) <= 4 * 7**0.5 and abs(a2) <= 6 * 7


def test_fp_elem_arithmetic():
    x = FpElem(12, 7)
    assert x.value == 5
    assert int(x * 3 + 1) == 2
    assert int(-x) == 2
    assert int(x**6) == 1
    assert FpElem(2, 7).legendre() == 1


def test_quad_ext_squares():
    p = 11
    nu = smallest_nonresidue(p)
    assert legendre(nu, p) == -1
    # every element of F_p is a square in F_{p^2}
    assert all(QuadExtElem(a, 0, p).quadratic_character() == 1 for a in range(1, p))
    squares = set()
    for a in range(p):
        for b in range(p):
            z = QuadExtElem(a, b, p)
            w = z * z
            squares.add((w.a, w.b))
    squares.discard((0, 0))
    assert len(squares) == (p * p - 1) // 2
    for a in range(p):
        for b in range(p):
            if (a, b) != (0, 0):
                want = 1 if (a, b) in squares else -1
                assert QuadExtElem(a, b, p).quadratic_character() == want


def test_cubic_split_type_examples():
    assert cubic_split_type(build_gd(1), 7) is SplitType.Irreducible
    assert cubic_split_type([0, -1, 0, 1], 5) is SplitType.Split3
    with pytest.raises(NotReducible):
        cubic_split_type(build_gd(4), 7)  # denominator 4(d+3) = 28


def test_split_type_matches_legendre_d():
    for p in primes_in(5, 199):
        for d in range(1, 60):
            if (d * (d + 3)) % p == 0:
                continue
            t = cubic_split_type(build_gd(d), p)
            want = -1 if t is SplitType.OneRoot else 1
            assert legendre(d, p) == want
