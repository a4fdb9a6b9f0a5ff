"""Tame conductor exponents from cluster pictures, and the family's conductor.

A cluster picture records the p-adic distances between the roots of the
defining sextic; together with the inertia action on roots it determines the
tame part of the conductor exponent:

    n_tame = 2g - #(U/I) + #(V/I) + [|R| and ord_p(c) both even]

with U the odd clusters s != R whose parent P satisfies
xi_P(lambda~_P) <= xi_P(d_P), and V the proper non-ubereven clusters with
xi_s(lambda~_s) = 0. For C_d every bad prime p >= 5 gives a one-cluster
picture, built by :func:`build_family_picture`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from sympy import factorint

from .arith import is_prime, is_squarefree, valuation
from .errors import DomainError, Unsupported, UsageError
from .family import _check_d

__all__ = [
    "Cluster",
    "ClusterPicture",
    "InertiaAction",
    "TameResult",
    "KnownConductor",
    "lambda_tilde",
    "xi",
    "tame_exponent",
    "exponent_at_prime",
    "conductor_known_part",
    "log_conductor_bracket",
    "build_family_picture",
    "WILD_CAPS",
]

# exponents of 2 and 3 in disc((d+3)^2 f_d) / (d^a (d+3)^b); used as caps
WILD_CAPS = {2: 26, 3: 21}


@dataclass(frozen=True)
class Cluster:
    roots: frozenset
    depth: Fraction | None = None  # None for singletons

    @property
    def size(self) -> int:
        return len(self.roots)

    @property
    def is_odd(self) -> bool:
        return self.size % 2 == 1

    @property
    def is_proper(self) -> bool:
        return self.size >= 2


class ClusterPicture:
    """Laminar family of proper clusters over a set of leaves.

    Singletons are implicit. ``lc_valuation`` is ord_p of the leading
    coefficient of the model.
    """

    def __init__(self, leaves: Sequence, clusters: Iterable[Cluster], lc_valuation: int):
        self.leaves = tuple(leaves)
        self.lc_valuation = int(lc_valuation)
        proper = sorted(
            (Cluster(frozenset(c.roots), Fraction(c.depth)) for c in clusters),
            key=lambda c: -c.size,
        )
        allroots = frozenset(self.leaves)
        if not proper or proper[0].roots != allroots:
            raise DomainError("the full set of roots must be a cluster")
        for c in proper:
            if c.size < 2:
                raise DomainError("proper clusters need at least two roots")
            if not c.roots <= allroots:
                raise DomainError("cluster contains unknown roots")
        for i, a in enumerate(proper):
            for b in proper[i + 1 :]:
                if a.roots == b.roots:
                    raise DomainError("repeated cluster")
                inter = a.roots & b.roots
                if inter and inter not in (a.roots, b.roots):
                    raise DomainError("clusters are not nested")
        self.proper = tuple(proper)
        self._singletons = {r: Cluster(frozenset([r])) for r in self.leaves}
        for s in self.proper[1:]:
            if not s.depth > self.parent(s).depth:
                raise DomainError("child depth must exceed parent depth")

    @property
    def root(self) -> Cluster:
        return self.proper[0]

    def all_clusters(self) -> list[Cluster]:
        return list(self.proper) + [self._singletons[r] for r in self.leaves]

    def parent(self, s: Cluster) -> Cluster:
        if s.roots == self.root.roots:
            raise DomainError("the root cluster has no parent")
        # smallest proper cluster strictly containing s
        best = None
        for c in self.proper:
            if s.roots < c.roots and (best is None or c.size < best.size):
                best = c
        return best

    def children(self, s: Cluster) -> list[Cluster]:
        return [c for c in self.all_clusters() if c.roots != self.root.roots and c.size < s.size
                and c.roots <= s.roots and self.parent(c).roots == s.roots]

    def wedge(self, a: frozenset, b: frozenset) -> Cluster:
        """Smallest cluster containing both root sets."""
        both = a | b
        return min((c for c in self.proper if both <= c.roots), key=lambda c: c.size)

    def is_ubereven(self, s: Cluster) -> bool:
        return s.size % 2 == 0 and all(c.size % 2 == 0 for c in self.children(s))

    def find(self, roots) -> Cluster:
        roots = frozenset(roots)
        for c in self.all_clusters():
            if c.roots == roots:
                return c
        raise DomainError(f"{set(roots)} is not a cluster")


@dataclass(frozen=True)
class InertiaAction:
    """Orbits of inertia on the roots and on the proper clusters.

    The stabilizer index [I : I_s] of a cluster is the size of its orbit.
    """

    leaf_orbits: tuple[frozenset, ...]
    cluster_orbits: tuple[tuple[frozenset, ...], ...]

    def index(self, s: Cluster) -> int:
        if s.size == 1:
            (r,) = s.roots
            for orb in self.leaf_orbits:
                if r in orb:
                    return len(orb)
        else:
            for orb in self.cluster_orbits:
                if s.roots in orb:
                    return len(orb)
        raise DomainError(f"cluster {set(s.roots)} is not covered by the action")

    def orbit_count(self, clusters: Iterable[Cluster]) -> int:
        seen = set()
        for s in clusters:
            if s.size == 1:
                (r,) = s.roots
                seen.add(("leaf", next(i for i, o in enumerate(self.leaf_orbits) if r in o)))
            else:
                seen.add(("cl", next(i for i, o in enumerate(self.cluster_orbits) if s.roots in o)))
        return len(seen)

    def validate(self, pic: ClusterPicture) -> None:
        leaves = [r for o in self.leaf_orbits for r in o]
        if sorted(leaves, key=repr) != sorted(pic.leaves, key=repr):
            raise DomainError("leaf orbits must partition the roots")
        listed = [c for o in self.cluster_orbits for c in o]
        if sorted(map(sorted, listed)) != sorted(sorted(c.roots) for c in pic.proper):
            raise DomainError("cluster orbits must partition the proper clusters")
        for orb in self.cluster_orbits:
            members = [pic.find(c) for c in orb]
            if len({(c.size, c.depth) for c in members}) != 1:
                raise DomainError("an orbit mixes clusters of different size or depth")
        # equivariance: conjugate roots lie in equally many clusters of each orbit
        for lorb in self.leaf_orbits:
            for corb in self.cluster_orbits:
                counts = {sum(r in c for c in corb) for r in lorb}
                if len(counts) != 1:
                    raise DomainError("inertia action does not respect the clusters")


@dataclass(frozen=True)
class TameResult:
    n_tame: int
    two_g: int
    u_orbits: int
    v_orbits: int
    bonus: int


def _ord2(x: Fraction) -> int:
    return valuation(x.numerator, 2) - valuation(x.denominator, 2)


def xi(action: InertiaAction, s: Cluster, a: Fraction) -> int:
    a = Fraction(a) * action.index(s)
    if a == 0:
        return 0
    return max(-_ord2(a), 0)


def lambda_tilde(s: Cluster, pic: ClusterPicture) -> Fraction:
    if not s.is_proper:
        raise DomainError("lambda~ is defined for proper clusters only")
    odd_children = sum(1 for c in pic.children(s) if c.is_odd)
    outside = sum(
        (pic.wedge(frozenset([r]), s.roots).depth for r in pic.leaves if r not in s.roots),
        Fraction(0),
    )
    return Fraction(pic.lc_valuation + odd_children * s.depth + outside, 2)


def tame_exponent(pic: ClusterPicture, action: InertiaAction, genus: int = 2) -> TameResult:
    action.validate(pic)
    root = pic.root
    U = []
    for s in pic.all_clusters():
        if s.roots == root.roots or not s.is_odd:
            continue
        P = pic.parent(s)
        if xi(action, P, lambda_tilde(P, pic)) <= xi(action, P, P.depth):
            U.append(s)
    V = [
        s
        for s in pic.proper
        if not pic.is_ubereven(s) and xi(action, s, lambda_tilde(s, pic)) == 0
    ]
    bonus = int(root.size % 2 == 0 and pic.lc_valuation % 2 == 0)
    u, v = action.orbit_count(U), action.orbit_count(V)
    return TameResult(2 * genus - u + v + bonus, 2 * genus, u, v, bonus)


def _check_sqfree(d: int) -> int:
    d = _check_d(d)
    if not is_squarefree(d):
        raise DomainError(f"d={d} is not square-free")
    return d


def build_family_picture(d: int, p: int) -> tuple[ClusterPicture, InertiaAction]:
    """One cluster of all six roots, with the depth and orbits at a bad p >= 5."""
    d = _check_d(d)
    p = int(p)
    if p < 5 or not is_prime(p):
        raise UsageError(f"p={p} must be a prime >= 5")
    leaves = tuple(range(6))
    if d % p == 0:
        k = valuation(d, p)
        depth, lc = Fraction(k, 2), 0
        orbit = 2 if k % 2 else 1
    elif (d + 3) % p == 0:
        k = valuation(d + 3, p)
        depth, lc = Fraction(k, 3), -k
        orbit = 3 // gcd(3, k)
    else:
        raise UsageError(f"p={p} is a good prime for d={d}")
    pic = ClusterPicture(leaves, [Cluster(frozenset(leaves), depth)], lc)
    orbits = tuple(frozenset(leaves[i : i + orbit]) for i in range(0, 6, orbit))
    return pic, InertiaAction(orbits, ((frozenset(leaves),),))


def exponent_at_prime(d: int, p: int) -> int:
    d = _check_sqfree(d)
    p = int(p)
    if p < 5:
        raise Unsupported(f"exponents at p={p} are only bracketed")
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    if d % p == 0:
        return 2
    if (d + 3) % p == 0:
        return 0 if valuation(d + 3, p) % 6 == 0 else 4
    return 0


@dataclass(frozen=True)
class KnownConductor:
    factors: dict

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors.items())

    def log(self) -> float:
        return sum(e * math.log(p) for p, e in self.factors.items())


def conductor_known_part(d: int) -> KnownConductor:
    """The prime-to-6 part of the conductor of C_d, factored."""
    d = _check_sqfree(d)
    primes = set(factorint(abs(d))) | set(factorint(abs(d + 3)))
    out = {}
    for p in sorted(primes):
        if p >= 5:
            e = exponent_at_prime(d, p)
            if e:
                out[p] = e
    return KnownConductor(out)


def log_conductor_bracket(d: int) -> tuple[float, float]:
    """[log known, log(known * 2^26 * 3^21)]."""
    low = conductor_known_part(d).log()
    return low, low + WILD_CAPS[2] * math.log(2) + WILD_CAPS[3] * math.log(3)
