"""Stickelberger elements of abelian CM extensions of Q.

An abelian field H is given as the fixed field of a subgroup U of (Z/m)^*.
The Galois group G = (Z/f)^*/U is realized at the true conductor f, with
a in (Z/f)^* corresponding to sigma_a : zeta_f -> zeta_f^a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, lcm

from .algebra_core import (
    QQ,
    AbelianGroupRealization,
    FiniteAbelianGroup,
    GaloisStructure,
    GroupRingElement,
    GroupRingSpace,
    IdealLattice,
    canonical_elements,
    odd_product_det,
)
from .numtheory import crt, divisors, kronecker_symbol, prime_factors, valuation


def _units(m: int) -> list[int]:
    """Residues in [0, m) prime to m (the single residue 0 when m = 1)."""
    return [a % m for a in range(1, m + 1) if gcd(a, m) == 1]


def _unit_subgroup(m: int, gens) -> set[int]:
    """Subgroup of (Z/m)^* generated by ``gens``."""
    if m == 1:
        return {0}
    seen = {1 % m}
    frontier = [1 % m]
    gens = [g % m for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % m
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _greedy_generators(m: int) -> list[int]:
    gens: list[int] = []
    span = _unit_subgroup(m, gens)
    for a in _units(m):
        if a not in span:
            gens.append(a)
            span = _unit_subgroup(m, gens)
    return gens


class AbelianFieldQ:
    """The subfield of Q(zeta_m) fixed by the subgroup of (Z/m)^* generated by ``subgroup``."""

    def __init__(self, m: int, subgroup=(), require_cm: bool = True):
        if m < 1:
            raise ValueError("modulus must be positive")
        sub = _unit_subgroup(m, list(subgroup))
        for u in sub:
            if gcd(u, m) != 1:
                raise ValueError(f"{u} is not a unit mod {m}")
        self.modulus = m
        # true conductor: the least f | m with {a = 1 mod f} inside U
        f = m
        for d in divisors(m):
            if all(a in sub for a in _units(m) if (a - 1) % d == 0):
                f = d
                break
        self.conductor = f
        self.subgroup = sorted({u % f for u in sub})
        unit_group = AbelianGroupRealization(_greedy_generators(f), lambda a, b: a * b % f, 1 % f)
        self._units_f = unit_group
        quot = unit_group.group.quotient([unit_group.vec(u) for u in self.subgroup])
        self._quot = quot
        self.group: FiniteAbelianGroup = quot.target
        self.conj = self.sigma(-1)
        self.is_cm = self.group.element_order(self.conj) == 2
        if require_cm and not self.is_cm:
            raise ValueError("complex conjugation is trivial: the field is totally real, not CM")

    # Galois data ---------------------------------------------------------

    def sigma(self, a: int) -> tuple[int, ...]:
        """The class of sigma_a for a prime to the conductor."""
        a %= self.conductor
        if gcd(a, self.conductor) != 1:
            raise ValueError(f"{a} is not prime to the conductor {self.conductor}")
        return self._quot(self._units_f.vec(a))

    @cached_property
    def ramified_primes(self) -> list[int]:
        return prime_factors(self.conductor)

    def inertia_generators(self, p: int) -> list[tuple[int, ...]]:
        f = self.conductor
        if f % p:
            return []
        f1 = f // p ** valuation(f, p)
        return sorted({self.sigma(a) for a in _units(f) if (a - 1) % f1 == 0})

    def inertia_group(self, p: int) -> list[tuple[int, ...]]:
        return self.group.subgroup(self.inertia_generators(p))

    def frobenius(self, p: int) -> tuple[int, ...]:
        """A Frobenius representative at p (unique when p is unramified)."""
        f = self.conductor
        if f % p:
            return self.sigma(p)
        v = valuation(f, p)
        f1 = f // p**v
        a = crt([p % f1 if f1 > 1 else 0, 1], [f1, p**v])
        return self.sigma(a)

    def decomposition_group(self, p: int) -> list[tuple[int, ...]]:
        return self.group.subgroup(self.inertia_generators(p) + [self.frobenius(p)])

    def galois_structure(self, primes=None) -> GaloisStructure:
        if not self.is_cm:
            raise ValueError("Galois structures are only built for CM fields")
        gal = GaloisStructure(self.group, self.conj)
        for p in self.ramified_primes if primes is None else primes:
            gal.add_place(p, self.inertia_generators(p), self.frobenius(p))
        return gal

    def is_ramified(self, p: int) -> bool:
        return self.conductor % p == 0

    @cached_property
    def roots_of_unity_order(self) -> int:
        """w(H): the number of roots of unity in H."""
        f = self.conductor
        n = max(d for d in divisors(f) if all((u - 1) % d == 0 for u in self.subgroup))
        return lcm(n, 2)

    def subfield_fixed_by(self, elements) -> tuple["AbelianFieldQ", dict]:
        """The fixed field of the subgroup generated by ``elements`` and the restriction map on G."""
        f = self.conductor
        target = set(self.group.subgroup(elements))
        extra = [a for a in _units(f) if self.sigma(a) in target]
        sub = AbelianFieldQ(f, self.subgroup + extra, require_cm=False)
        restrict = {}
        for a in _units(f):
            restrict.setdefault(self.sigma(a), sub.sigma(a))
        return sub, restrict

    def key(self):
        return (self.conductor, tuple(self.subgroup))

    def to_json(self) -> dict:
        return {
            "conductor": str(self.conductor),
            "subgroup": [str(u) for u in self.subgroup],
            "galois_group": self.group.to_json(),
            "conjugation": [str(x) for x in self.conj],
        }

    def __repr__(self):
        return f"AbelianFieldQ(conductor={self.conductor}, G={list(self.group.invariant_factors)})"


def quadratic_field(d: int) -> AbelianFieldQ:
    """Q(sqrt(d)) for a fundamental discriminant d, as the kernel of its Kronecker character."""
    m = abs(d)
    return AbelianFieldQ(m, [a for a in _units(m) if kronecker_symbol(d, a) == 1])


def compositum_field(discs) -> AbelianFieldQ:
    """The compositum of the quadratic fields of the given fundamental discriminants."""
    m = 1
    for d in discs:
        m = lcm(m, abs(d))
    return AbelianFieldQ(m, [a for a in _units(m) if all(kronecker_symbol(d, a) == 1 for d in discs)])


# ---------------------------------------------------------------------------
# Stickelberger elements


def partial_zeta_zero(m: int, a: int) -> Fraction:
    """Value at s = 0 of the partial zeta function of a mod m (Euler factors at p | m removed)."""
    if not 1 <= a <= m or gcd(a, m) != 1:
        raise ValueError(f"need 1 <= a <= m with gcd(a, m) = 1, got a={a}, m={m}")
    return Fraction(1, 2) - Fraction(a, m)


@dataclass
class StickelbergerElement:
    field: AbelianFieldQ
    S: tuple[int, ...]
    T: tuple[int, ...]
    element: GroupRingElement = field(repr=False)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "S": ["inf"] + [str(p) for p in self.S],
            "T": [str(p) for p in self.T],
            "element": self.element.to_json(),
        }


def _base_element(field_: AbelianFieldQ) -> GroupRingElement:
    f = field_.conductor
    g = field_.group
    coeffs = [Fraction(0)] * g.order
    for a in range(1, f + 1):
        if gcd(a, f) == 1:
            coeffs[g.index(g.neg(field_.sigma(a)))] += partial_zeta_zero(f, a)
    return GroupRingElement(g, coeffs, QQ)


def _depleted(field_: AbelianFieldQ, s_fin: frozenset, cache: dict) -> GroupRingElement:
    key = (field_.key(), s_fin)
    if key in cache:
        return cache[key]
    g = field_.group
    missing = [p for p in field_.ramified_primes if p not in s_fin]
    if not missing:
        out = _base_element(field_)
        for p in sorted(s_fin):
            if not field_.is_ramified(p):
                out = out * (1 - GroupRingElement.basis(g, g.neg(field_.frobenius(p))))
    else:
        v = missing[0]
        inertia = field_.inertia_group(v)
        e_v = GroupRingElement.norm_element(g, inertia) * Fraction(1, len(inertia))
        with_v = _depleted(field_, s_fin | {v}, cache)
        sub, restrict = field_.subfield_fixed_by(inertia)
        lower = _depleted(sub, s_fin, cache)
        # lift to G via any section of G -> G/I_v; e_v makes the choice irrelevant
        section = {}
        for x, y in restrict.items():
            section.setdefault(y, x)
        lifted = GroupRingElement(g, {section[h]: c for h, c in lower.items()}, QQ)
        out = (1 - e_v) * with_v + e_v * lifted
    cache[key] = out
    return out


def theta(field_: AbelianFieldQ, S=(), T=()) -> StickelbergerElement:
    """Theta_{S,T}; ``S`` lists the finite primes of the depletion set (infinity is implicit)."""
    s_fin = tuple(sorted(set(int(p) for p in S)))
    t = tuple(sorted(set(int(p) for p in T)))
    if set(s_fin) & set(t):
        raise ValueError("S and T must be disjoint")
    for ell in t:
        if field_.is_ramified(ell):
            raise ValueError(f"T contains the ramified prime {ell}")
    g = field_.group
    out = _depleted(field_, frozenset(s_fin), {})
    for ell in t:
        out = out * (1 - GroupRingElement.basis(g, g.neg(field_.frobenius(ell)), QQ, ell))
    return StickelbergerElement(field_, s_fin, t, out)


@dataclass
class DRCondResult:
    holds: bool
    roots_of_unity_order: int
    congruent_exponents: list[int]
    two_characteristics: bool

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "w": str(self.roots_of_unity_order),
            "congruent_to_one": [str(j) for j in self.congruent_exponents],
            "two_residue_characteristics": self.two_characteristics,
        }


def _root_reduces_to_one(order: int, ell: int) -> bool:
    # a root of unity of exact order n is 1 modulo a prime above ell iff n is a power of ell
    while order % ell == 0:
        order //= ell
    return order == 1


def check_drcond(field_: AbelianFieldQ, T) -> DRCondResult:
    """Whether no root of unity other than 1 is congruent to 1 at every prime above T."""
    w = field_.roots_of_unity_order
    t = sorted(set(T))
    good = []
    for j in range(w):
        order = w // gcd(j, w)
        if all(_root_reduces_to_one(order, ell) for ell in t):
            good.append(j)
    two = len(t) >= 2
    return DRCondResult(good == [0], w, good, two)


def check_integrality(th: StickelbergerElement) -> bool:
    return th.element.is_integral()


def sinnott_kurihara_ideal(field_: AbelianFieldQ, T, variant: str = "integral", p: int | None = None) -> IdealLattice:
    """KS^T, or its p-modified version with Sigma = S_inf plus the ramified primes above p."""
    if not check_drcond(field_, T).holds:
        raise ValueError("condition on T fails: a nontrivial root of unity is congruent to 1 above T")
    gal = field_.galois_structure()
    g = field_.group
    if variant == "integral":
        base = theta(field_, (), T).element.sharp()
        places = field_.ramified_primes
    elif variant == "p_modified":
        if p is None or p == 2:
            raise ValueError("the p-modified ideal needs an odd prime p")
        sigma = [v for v in field_.ramified_primes if v == p]
        base = theta(field_, sigma, T).element.sharp()
        places = [v for v in field_.ramified_primes if v != p]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    factors = [
        (canonical_elements(gal, v, "norm_of_inertia"), canonical_elements(gal, v, "one_minus_frob_times_e"))
        for v in places
    ]
    gens = []
    for choice in product(*factors):
        x = base
        for y in choice:
            x = x * y
        gens.append(x)
    space = GroupRingSpace(g)
    lat = IdealLattice.from_vectors(space, [space.vector(x) for x in gens])
    if variant == "integral" and lat.denominator != 1:
        raise AssertionError("Sinnott-Kurihara ideal is not integral")
    return lat


__all__ = [
    "AbelianFieldQ",
    "DRCondResult",
    "StickelbergerElement",
    "check_drcond",
    "check_integrality",
    "compositum_field",
    "odd_product_det",
    "partial_zeta_zero",
    "quadratic_field",
    "sinnott_kurihara_ideal",
    "theta",
]
