import math
from fractions import Fraction

import pytest

from twistlab.errors import DomainError, Unsupported, UsageError
from twistlab.conductor import (
    WILD_CAPS,
    Cluster,
    ClusterPicture,
    InertiaAction,
    build_family_picture,
    conductor_known_part,
    exponent_at_prime,
    lambda_tilde,
    log_conductor_bracket,
    tame_exponent,
    xi,
)

LEAVES = tuple(range(6))
ROOT = frozenset(LEAVES)


def trivial_action(pic):
    return InertiaAction(tuple(frozenset([r]) for r in pic.leaves),
                         tuple((c.roots,) for c in pic.proper))


def test_good_reduction_has_exponent_zero():
    pic = ClusterPicture(LEAVES, [Cluster(ROOT, Fraction(0))], 0)
    r = tame_exponent(pic, trivial_action(pic))
    assert (r.n_tame, r.u_orbits, r.v_orbits, r.bonus) == (0, 6, 1, 1)


def test_single_twin_is_toric_rank_one():
    twin = frozenset([0, 1])
    pic = ClusterPicture(LEAVES, [Cluster(ROOT, Fraction(0)), Cluster(twin, Fraction(1))], 0)
    assert lambda_tilde(pic.find(twin), pic) == 1
    assert lambda_tilde(pic.root, pic) == 0
    assert tame_exponent(pic, trivial_action(pic)).n_tame == 1


def test_lambda_tilde_family_examples():
    pic, _ = build_family_picture(5, 5)
    assert pic.root.depth == Fraction(1, 2) and pic.lc_valuation == 0
    assert lambda_tilde(pic.root, pic) == Fraction(3, 2)
    pic, act = build_family_picture(2, 5)
    assert pic.root.depth == Fraction(1, 3) and pic.lc_valuation == -1
    assert lambda_tilde(pic.root, pic) == Fraction(1, 2)
    assert act.index(pic.find([0])) == 3
    with pytest.raises(DomainError):
        lambda_tilde(pic.find([0]), pic)


def test_xi():
    pic, act = build_family_picture(2, 5)
    s = pic.find([0])
    assert xi(act, s, Fraction(1, 2)) == 1  # scaled by the orbit size 3
    assert xi(act, s, Fraction(2, 3)) == 0
    assert xi(act, pic.root, Fraction(1, 4)) == 2
    assert xi(act, pic.root, Fraction(0)) == 0


@pytest.mark.parametrize(
    "clusters",
    [
        [Cluster(frozenset([0, 1, 2]), Fraction(1))],  # no root cluster
        [Cluster(ROOT, Fraction(0)), Cluster(frozenset([0, 1]), Fraction(1)),
         Cluster(frozenset([1, 2]), Fraction(1))],  # overlapping
        [Cluster(ROOT, Fraction(1)), Cluster(frozenset([0, 1]), Fraction(1))],  # depth not increasing
        [Cluster(ROOT, Fraction(0)), Cluster(frozenset([0, 9]), Fraction(1))],  # unknown root
    ],
)
def test_picture_validation(clusters):
    with pytest.raises(DomainError):
        ClusterPicture(LEAVES, clusters, 0)


def test_action_validation():
    twin = frozenset([0, 1])
    pic = ClusterPicture(LEAVES, [Cluster(ROOT, Fraction(0)), Cluster(twin, Fraction(1))], 0)
    bad_leaves = InertiaAction((frozenset([0, 1, 2]),), ((ROOT,), (twin,)))
    with pytest.raises(DomainError):
        tame_exponent(pic, bad_leaves)
    # swapping 1 and 2 does not preserve the twin
    bad_equiv = InertiaAction((frozenset([0]), frozenset([1, 2]), frozenset([3]), frozenset([4]),
                               frozenset([5])), ((ROOT,), (twin,)))
    with pytest.raises(DomainError):
        tame_exponent(pic, bad_equiv)


def test_exponent_examples():
    assert exponent_at_prime(5, 5) == 2
    assert exponent_at_prime(2, 5) == 4
    assert exponent_at_prime(15622, 5) == 0
    assert exponent_at_prime(1, 7) == 0
    with pytest.raises(Unsupported):
        exponent_at_prime(1, 2)
    with pytest.raises(DomainError):
        exponent_at_prime(12, 5)
    with pytest.raises(UsageError):
        exponent_at_prime(1, 9)


def test_family_pictures_match_rule():
    for d in range(1, 3000):
        if d == 3 or any(d % (q * q) == 0 for q in range(2, 55)):
            continue
        for p in (5, 7, 11, 13):
            if (d * (d + 3)) % p == 0:
                pic, act = build_family_picture(d, p)
                assert tame_exponent(pic, act).n_tame == exponent_at_prime(d, p)


def test_known_part():
    k = conductor_known_part(2)
    assert k.factors == {5: 4} and k.value == 625
    k = conductor_known_part(14)
    assert k.factors == {7: 2, 17: 4}
    assert math.isclose(k.log(), math.log(k.value))
    assert conductor_known_part(1).value == 1
    lo, hi = log_conductor_bracket(14)
    assert math.isclose(hi - lo, 26 * math.log(2) + 21 * math.log(3))
    assert WILD_CAPS == {2: 26, 3: 21}
