"""Finite abelian groups, characters, group rings, minus parts and ideal lattices.

Group elements are tuples of integers reduced modulo the invariant factors,
written additively. Group-ring coefficients are stored densely in the
lexicographic order of the group elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm

from sympy import primitive_root

from .cyclotomic import Cyclotomic
from .intlinalg import det, det_fraction, hnf, smith_normal_form, solve_in_lattice


class StructureError(ValueError):
    """Operands live in different groups, rings or ambient spaces."""


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_k with d_i | d_{i+1} and every d_i >= 2."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        for i, x in enumerate(d):
            if x < 2:
                raise ValueError(f"invariant factor {x} < 2")
            if i + 1 < len(d) and d[i + 1] % x:
                raise ValueError(f"invariant factors {d} do not form a divisibility chain")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def generators(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def reduce(self, v) -> tuple[int, ...]:
        return tuple(int(x) % d for x, d in zip(v, self.invariant_factors))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def scale(self, n: int, a) -> tuple[int, ...]:
        return tuple((n * x) % d for x, d in zip(a, self.invariant_factors))

    def element_order(self, a) -> int:
        n = 1
        for x, d in zip(a, self.invariant_factors):
            n = lcm(n, d // gcd(x, d))
        return n

    def elements(self) -> list[tuple[int, ...]]:
        return _elements(self.invariant_factors)

    def index(self, a) -> int:
        i = 0
        for x, d in zip(a, self.invariant_factors):
            i = i * d + x % d
        return i

    def subgroup(self, gens) -> list[tuple[int, ...]]:
        """Sorted list of the elements of the subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = [self.reduce(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def quotient(self, gens) -> "GroupHom":
        """The projection onto G / <gens>."""
        k = self.rank
        rels = [[d * int(i == j) for j in range(k)] for i, d in enumerate(self.invariant_factors)]
        rels += [list(g) for g in gens]
        return _presented_quotient(self, rels, k)

    def to_json(self) -> dict:
        return {"invariant_factors": [str(d) for d in self.invariant_factors]}


@lru_cache(maxsize=256)
def _elements(d: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [tuple(e) for e in product(*(range(x) for x in d))]


@lru_cache(maxsize=64)
def _add_table(d: tuple[int, ...]) -> list[list[int]]:
    g = FiniteAbelianGroup(d)
    els = g.elements()
    return [[g.index(g.add(a, b)) for b in els] for a in els]


@lru_cache(maxsize=64)
def _neg_table(d: tuple[int, ...]) -> list[int]:
    g = FiniteAbelianGroup(d)
    return [g.index(g.neg(a)) for a in g.elements()]


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given on row vectors: x -> x·matrix, reduced in the target."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, x) -> tuple[int, ...]:
        out = [0] * self.target.rank
        for xi, row in zip(x, self.matrix):
            if xi:
                for j, r in enumerate(row):
                    out[j] += xi * r
        return self.target.reduce(out)

    def kernel_generators(self) -> list[tuple[int, ...]]:
        return [x for x in self.source.elements() if not any(self(x))]


def _presented_quotient(source: FiniteAbelianGroup, rels, k: int) -> GroupHom:
    # Z^k / rowspan(rels): SNF with new coordinates y = x·V
    h = hnf(rels, k)
    if len(h) < k:
        raise ValueError("quotient is infinite")
    d, _, v = smith_normal_form(h)
    keep = [i for i in range(k) if d[i][i] != 1]
    target = FiniteAbelianGroup(tuple(d[i][i] for i in keep))
    mat = tuple(tuple(v[r][i] for i in keep) for r in range(k))
    return GroupHom(source, target, mat)


class AbelianGroupRealization:
    """A concrete finite abelian group identified with a ``FiniteAbelianGroup``.

    Built from generators, a multiplication and an identity, by enumerating
    the Cayley graph and reducing the Schreier relations to Smith form.
    Elements must be hashable.
    """

    def __init__(self, gens, mul, identity_element):
        self.gens = list(gens)
        k = len(self.gens)
        words = {identity_element: (0,) * k}
        frontier = [identity_element]
        rels = []
        while frontier:
            nxt = []
            for x in frontier:
                vx = words[x]
                for j, g in enumerate(self.gens):
                    y = mul(x, g)
                    step = tuple(c + (i == j) for i, c in enumerate(vx))
                    if y in words:
                        r = [a - b for a, b in zip(step, words[y])]
                        if any(r):
                            rels.append(r)
                    else:
                        words[y] = step
                        nxt.append(y)
            frontier = nxt
        free = FiniteAbelianGroup(())
        if k:
            self.hom = _presented_quotient(free, rels, k)
        else:
            self.hom = GroupHom(free, free, ())
        self.group = self.hom.target
        self._vec = {x: self.hom(w) for x, w in words.items()}
        self._elem = {v: x for x, v in self._vec.items()}
        if len(self._elem) != self.group.order:
            raise ValueError("inconsistent group realization")

    def vec(self, x) -> tuple[int, ...]:
        return self._vec[x]

    def elem(self, v):
        return self._elem[self.group.reduce(v)]

    def elements(self):
        return [self._elem[v] for v in self.group.elements()]


# ---------------------------------------------------------------------------
# characters


def root_of_unity_mod(n: int, p: int, m: int) -> int:
    """A primitive n-th root of unity in Z/p^m (Teichmuller lift); needs n | p - 1."""
    if (p - 1) % n:
        raise ValueError(f"no primitive {n}-th root of unity in Z/{p}^{m}: {n} does not divide {p - 1}")
    mod = p**m
    t = pow(primitive_root(p), (p - 1) // n, p)
    return pow(t, p ** (m - 1), mod)


@dataclass(frozen=True)
class Character:
    """chi(gen_i) = zeta_N^{exponents[i]} with N the exponent of the group."""

    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        n = self.group.exponent
        for e, d in zip(self.exponents, self.group.invariant_factors):
            if (e * d) % n:
                raise ValueError("character exponents do not respect generator orders")

    @property
    def modulus(self) -> int:
        return self.group.exponent

    def exponent_at(self, g) -> int:
        return sum(e * x for e, x in zip(self.exponents, g)) % self.modulus

    def __call__(self, g) -> Cyclotomic:
        return Cyclotomic.root(self.modulus, self.exponent_at(g))

    def order(self) -> int:
        n = self.modulus
        return n // gcd(n, *self.exponents) if self.exponents else 1

    def is_trivial(self) -> bool:
        return not any(e % self.modulus for e in self.exponents)

    def is_odd(self, conj) -> bool:
        return 2 * self.exponent_at(conj) == self.modulus

    def conjugate(self) -> "Character":
        return Character(self.group, tuple((-e) % self.modulus for e in self.exponents))

    def __mul__(self, other: "Character") -> "Character":
        if other.group != self.group:
            raise StructureError("characters of different groups")
        return Character(self.group, tuple((a + b) % self.modulus for a, b in zip(self.exponents, other.exponents)))

    def kernel_contains(self, g) -> bool:
        return self.exponent_at(g) == 0

    def evaluate(self, x: "GroupRingElement") -> Cyclotomic:
        if x.group != self.group:
            raise StructureError("character and element live on different groups")
        if x.ring.kind == "mod":
            raise StructureError("use evaluate_mod for Z/p^m coefficients")
        out: dict[int, Fraction] = {}
        for g, c in zip(self.group.elements(), x.coeffs):
            if c:
                e = self.exponent_at(g)
                out[e] = out.get(e, 0) + Fraction(c)
        return Cyclotomic(self.modulus, out)

    def evaluate_mod(self, g, p: int, m: int) -> int:
        """chi(g) in Z/p^m via a fixed Teichmuller root of unity."""
        w = root_of_unity_mod(self.modulus, p, m)
        return pow(w, self.exponent_at(g), p**m)

    def evaluate_element_mod(self, x: "GroupRingElement", p: int, m: int) -> int:
        mod = p**m
        w = root_of_unity_mod(self.modulus, p, m)
        total = 0
        for g, c in zip(self.group.elements(), x.coeffs):
            if c:
                c = Fraction(c)
                total += c.numerator * pow(c.denominator, -1, mod) * pow(w, self.exponent_at(g), mod)
        return total % mod


def enumerate_characters(group: FiniteAbelianGroup) -> list[Character]:
    """All characters of ``group``, in lexicographic order of exponent vectors."""
    n = group.exponent
    steps = [n // d for d in group.invariant_factors]
    return [
        Character(group, tuple(t * s for t, s in zip(ts, steps)))
        for ts in product(*(range(d) for d in group.invariant_factors))
    ]


def odd_characters(group: FiniteAbelianGroup, conj) -> list[Character]:
    return [chi for chi in enumerate_characters(group) if chi.is_odd(conj)]


# ---------------------------------------------------------------------------
# group rings


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "ZZ", "QQ" or "mod"
    modulus: int = 0

    def coerce(self, x):
        if self.kind == "QQ":
            return Fraction(x)
        if self.kind == "ZZ":
            x = Fraction(x)
            if x.denominator != 1:
                raise StructureError(f"{x} is not an integer")
            return int(x)
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def __str__(self):
        return f"Z/{self.modulus}" if self.kind == "mod" else self.kind


ZZ = CoefficientRing("ZZ")
QQ = CoefficientRing("QQ")


def integers_mod(n: int) -> CoefficientRing:
    if n < 2:
        raise ValueError("modulus must be at least 2")
    return CoefficientRing("mod", n)


class GroupRingElement:
    """An element of R[G] for R in {Z, Q, Z/N}."""

    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group: FiniteAbelianGroup, coeffs, ring: CoefficientRing = QQ):
        self.group = group
        self.ring = ring
        if isinstance(coeffs, dict):
            dense = [0] * group.order
            for g, c in coeffs.items():
                dense[group.index(group.reduce(g))] += c
            coeffs = dense
        if len(coeffs) != group.order:
            raise StructureError("coefficient vector has the wrong length")
        self.coeffs = tuple(ring.coerce(c) for c in coeffs)

    @classmethod
    def zero(cls, group, ring=QQ):
        return cls(group, [0] * group.order, ring)

    @classmethod
    def scalar(cls, group, c, ring=QQ):
        v = [0] * group.order
        v[0] = c
        return cls(group, v, ring)

    @classmethod
    def basis(cls, group, g, ring=QQ, c=1):
        v = [0] * group.order
        v[group.index(group.reduce(g))] = c
        return cls(group, v, ring)

    @classmethod
    def norm_element(cls, group, elements, ring=QQ):
        v = [0] * group.order
        for g in elements:
            v[group.index(g)] += 1
        return cls(group, v, ring)

    def coefficient(self, g):
        return self.coeffs[self.group.index(self.group.reduce(g))]

    def items(self):
        return [(g, c) for g, c in zip(self.group.elements(), self.coeffs) if c]

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            raise StructureError("expected a group-ring element")
        if other.group != self.group:
            raise StructureError(f"groups differ: {self.group} vs {other.group}")
        if other.ring != self.ring:
            raise StructureError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    def _scalar_like(self, other):
        return isinstance(other, (int, Fraction))

    def __add__(self, other):
        if self._scalar_like(other):
            other = GroupRingElement.scalar(self.group, other, self.ring)
        self._check(other)
        return GroupRingElement(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, [-a for a in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._scalar_like(other):
            return GroupRingElement(self.group, [a * other for a in self.coeffs], self.ring)
        self._check(other)
        table = _add_table(self.group.invariant_factors)
        out = [0] * self.group.order
        for i, a in enumerate(self.coeffs):
            if a:
                row = table[i]
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[row[j]] += a * b
        return GroupRingElement(self.group, out, self.ring)

    def __rmul__(self, other):
        if self._scalar_like(other):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = GroupRingElement.scalar(self.group, 1, self.ring)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def translate(self, g):
        """Multiply by the group element g."""
        gi = self.group.index(self.group.reduce(g))
        table = _add_table(self.group.invariant_factors)[gi]
        out = [0] * self.group.order
        for j, b in enumerate(self.coeffs):
            if b:
                out[table[j]] = b
        return GroupRingElement(self.group, out, self.ring)

    def sharp(self):
        """The involution induced by g -> g^{-1}."""
        neg = _neg_table(self.group.invariant_factors)
        out = [0] * self.group.order
        for j, b in enumerate(self.coeffs):
            out[neg[j]] = b
        return GroupRingElement(self.group, out, self.ring)

    def augmentation(self):
        return self.ring.coerce(sum(self.coeffs))

    def change_ring(self, ring: CoefficientRing):
        return GroupRingElement(self.group, self.coeffs, ring)

    def push_forward(self, hom: GroupHom):
        """Image under the ring map induced by a group homomorphism."""
        if hom.source != self.group:
            raise StructureError("homomorphism source differs from the element's group")
        out = [0] * hom.target.order
        for g, c in zip(self.group.elements(), self.coeffs):
            if c:
                out[hom.target.index(hom(g))] += c
        return GroupRingElement(hom.target, out, self.ring)

    def denominator(self) -> int:
        if self.ring.kind != "QQ":
            return 1
        return lcm(1, *(c.denominator for c in self.coeffs))

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if self._scalar_like(other):
            other = GroupRingElement.scalar(self.group, other, self.ring)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.group, self.ring, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*{list(g)}" for g, c in self.items()]
        return f"GroupRingElement[{self.ring}]({' + '.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "ring": str(self.ring),
            "coefficients": [_enc(c) for c in self.coeffs],
        }


def _enc(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def groupring_arith(a: GroupRingElement, b: GroupRingElement | None, op: str):
    """Dispatch for add, mul, sharp and augmentation."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sharp":
        return a.sharp()
    if op == "augmentation":
        return a.augmentation()
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Galois structure


@dataclass(frozen=True)
class PlaceData:
    inertia: tuple[tuple[int, ...], ...]
    frobenius: tuple[int, ...]


@dataclass
class GaloisStructure:
    group: FiniteAbelianGroup
    complex_conjugation: tuple[int, ...]
    places: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.group.element_order(self.complex_conjugation) != 2:
            raise ValueError("complex conjugation must have order 2")

    def add_place(self, label, inertia, frobenius):
        inertia = tuple(self.group.reduce(g) for g in inertia)
        self.places[label] = PlaceData(inertia, self.group.reduce(frobenius))

    def _place(self, v) -> PlaceData:
        if v not in self.places:
            raise KeyError(f"place {v!r} is not labeled")
        return self.places[v]

    def inertia_subgroup(self, v) -> list[tuple[int, ...]]:
        return self.group.subgroup(self._place(v).inertia)

    def decomposition_subgroup(self, v) -> list[tuple[int, ...]]:
        pd = self._place(v)
        return self.group.subgroup(list(pd.inertia) + [pd.frobenius])

    def frobenius(self, v):
        return self._place(v).frobenius


def canonical_elements(gal: GaloisStructure, v, kind: str) -> GroupRingElement:
    """N I_v, e_v = N I_v / #I_v, or 1 - sigma_v e_v in Q[G]."""
    g = gal.group
    inertia = gal.inertia_subgroup(v)
    n_i = GroupRingElement.norm_element(g, inertia, QQ)
    if kind == "norm_of_inertia":
        return n_i
    e_v = n_i * Fraction(1, len(inertia))
    if kind == "unramified_idempotent_numerator":
        return e_v
    if kind != "one_minus_frob_times_e":
        raise ValueError(f"unknown kind {kind!r}")
    frob = gal.frobenius(v)
    out = 1 - e_v.translate(frob)
    for tau in inertia:
        alt = 1 - e_v.translate(g.add(frob, tau))
        if alt != out:
            raise AssertionError("1 - sigma_v e_v depends on the Frobenius representative")
    return out


# ---------------------------------------------------------------------------
# ambient spaces for lattices


class GroupRingSpace:
    """Q[G] with coordinates indexed by group elements."""

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group

    @property
    def dim(self) -> int:
        return self.group.order

    @property
    def key(self):
        return ("group_ring", self.group.invariant_factors)

    def vector(self, x: GroupRingElement) -> list[Fraction]:
        if x.group != self.group:
            raise StructureError("element lives on a different group")
        return [Fraction(c) for c in x.coeffs]

    def element(self, vec) -> GroupRingElement:
        return GroupRingElement(self.group, vec, QQ)

    def mul(self, u, v):
        return self.vector(self.element(u) * self.element(v))

    def translate(self, g, v):
        return self.vector(self.element(v).translate(g))

    def sharp(self, v):
        return self.vector(self.element(v).sharp())


class MinusSpace:
    """Q[G]/(1 + conj), coordinates on coset representatives of G/<conj>.

    The representative of a coset {g, g·conj} is its lexicographically first
    element; g·conj maps to minus the representative.
    """

    def __init__(self, group: FiniteAbelianGroup, conj):
        conj = group.reduce(conj)
        if group.element_order(conj) != 2:
            raise ValueError("conjugation must have order 2")
        self.group = group
        self.conj = conj
        reps, where = [], {}
        for g in group.elements():
            if g in where:
                continue
            h = group.add(g, conj)
            where[g] = (len(reps), 1)
            where[h] = (len(reps), -1)
            reps.append(g)
        self.reps = reps
        self._where = where

    @property
    def dim(self) -> int:
        return len(self.reps)

    @property
    def key(self):
        return ("minus", self.group.invariant_factors, self.conj)

    def project(self, x: GroupRingElement) -> "MinusElement":
        if x.group != self.group:
            raise StructureError("element lives on a different group")
        if x.ring.kind == "mod" and x.ring.modulus % 2 == 0:
            raise StructureError("2 must be invertible in the coefficient ring")
        out = [0] * self.dim
        for g, c in zip(self.group.elements(), x.coeffs):
            if c:
                i, s = self._where[g]
                out[i] += s * c
        if x.ring.kind == "mod":
            out = [c % x.ring.modulus for c in out]
        return MinusElement(self, tuple(out), x.ring)

    def vector(self, x) -> list[Fraction]:
        if isinstance(x, GroupRingElement):
            x = self.project(x)
        return [Fraction(c) for c in x.coords]

    def lift(self, vec, ring=QQ) -> GroupRingElement:
        d = {g: c for g, c in zip(self.reps, vec)}
        return GroupRingElement(self.group, d, ring)

    def element(self, vec) -> "MinusElement":
        return MinusElement(self, tuple(Fraction(c) for c in vec), QQ)

    def mul(self, u, v):
        return self.vector(self.lift(u) * self.lift(v))

    def translate(self, g, v):
        return self.vector(self.lift(v).translate(g))

    def sharp(self, v):
        return self.vector(self.lift(v).sharp())

    def multiplication_matrix(self, x: GroupRingElement) -> list[list[Fraction]]:
        """Rows: images of the basis vectors under multiplication by x."""
        return [self.vector(x.change_ring(QQ).translate(g)) for g in self.reps]


@dataclass(frozen=True)
class MinusElement:
    space: MinusSpace
    coords: tuple
    ring: CoefficientRing

    def _check(self, other):
        if not isinstance(other, MinusElement) or other.space.key != self.space.key or other.ring != self.ring:
            raise StructureError("minus elements live in different rings")

    def __add__(self, other):
        self._check(other)
        return self._new([a + b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other):
        self._check(other)
        prod = self.space.lift(self.coords, self.ring) * self.space.lift(other.coords, self.ring)
        return self.space.project(prod)

    def _new(self, coords):
        if self.ring.kind == "mod":
            coords = [c % self.ring.modulus for c in coords]
        return MinusElement(self.space, tuple(coords), self.ring)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if isinstance(other, MinusElement):
            return self.space.key == other.space.key and self.ring == other.ring and tuple(self.coords) == tuple(other.coords)
        return NotImplemented

    def __hash__(self):
        return hash((self.space.key, self.coords))


def minus_projection(x: GroupRingElement, conj) -> MinusElement:
    return MinusSpace(x.group, conj).project(x)


# ---------------------------------------------------------------------------
# ideal lattices


def _common_denominator(vectors) -> int:
    d = 1
    for v in vectors:
        for c in v:
            d = lcm(d, Fraction(c).denominator)
    return d


class IdealLattice:
    """(1/denominator)·rowspan(rows) inside an ambient Q[G] or Q[G]^-.

    ``rows`` is the row Hermite normal form; the denominator is the smallest
    positive integer making all basis vectors integral. Lattices of any rank
    are allowed, including the zero lattice.
    """

    def __init__(self, ambient, rows, denominator: int = 1):
        rows = hnf(rows, ambient.dim) if rows else []
        g = denominator
        for r in rows:
            for x in r:
                g = gcd(g, x)
        g = g or 1
        self.ambient = ambient
        self.rows = [[x // g for x in r] for r in rows]
        self.denominator = denominator // g if rows else 1

    @classmethod
    def from_vectors(cls, ambient, vectors, close_under_group: bool = True) -> "IdealLattice":
        vectors = [list(v) for v in vectors]
        if close_under_group:
            vectors = [ambient.translate(g, v) for v in vectors for g in ambient.group.elements()]
        d = _common_denominator(vectors)
        rows = [[int(Fraction(c) * d) for c in v] for v in vectors]
        return cls(ambient, [r for r in rows if any(r)], d)

    @classmethod
    def unit(cls, ambient) -> "IdealLattice":
        one = GroupRingElement.scalar(ambient.group, 1)
        return cls.from_vectors(ambient, [ambient.vector(one)])

    @classmethod
    def zero(cls, ambient) -> "IdealLattice":
        return cls(ambient, [], 1)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient.dim

    def basis(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denominator) for x in r] for r in self.rows]

    def _same(self, other):
        if self.ambient.key != other.ambient.key:
            raise StructureError("lattices live in different ambient rings")

    def _scaled(self, vec, d):
        out = []
        for c in vec:
            c = Fraction(c) * d
            if c.denominator != 1:
                return None
            out.append(int(c))
        return out

    def coordinates(self, x):
        """Integer coefficients expressing x in the basis, or None."""
        vec = self.ambient.vector(x) if not isinstance(x, (list, tuple)) else x
        v = self._scaled(vec, self.denominator)
        if v is None:
            return None
        if not self.rows:
            return [] if not any(v) else None
        return solve_in_lattice(self.rows, v)

    def contains(self, x) -> bool:
        return self.coordinates(x) is not None

    def contains_lattice(self, other: "IdealLattice") -> bool:
        self._same(other)
        return all(self.contains(v) for v in other.basis())

    def __eq__(self, other):
        if not isinstance(other, IdealLattice):
            return NotImplemented
        return (
            self.ambient.key == other.ambient.key
            and self.denominator == other.denominator
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient.key, self.denominator, tuple(map(tuple, self.rows))))

    def __add__(self, other: "IdealLattice") -> "IdealLattice":
        self._same(other)
        return IdealLattice.from_vectors(self.ambient, self.basis() + other.basis(), close_under_group=False)

    def __mul__(self, other: "IdealLattice") -> "IdealLattice":
        self._same(other)
        prods = [self.ambient.mul(u, v) for u in self.basis() for v in other.basis()]
        return IdealLattice.from_vectors(self.ambient, prods, close_under_group=False)

    def scale(self, x) -> "IdealLattice":
        """The product with the principal ideal generated by x."""
        vec = self.ambient.vector(x)
        return IdealLattice.from_vectors(self.ambient, [self.ambient.mul(u, vec) for u in self.basis()], False)

    def sharp(self) -> "IdealLattice":
        return IdealLattice.from_vectors(self.ambient, [self.ambient.sharp(v) for v in self.basis()], False)

    def project_minus(self, space: MinusSpace) -> "IdealLattice":
        if not isinstance(self.ambient, GroupRingSpace) or space.group != self.ambient.group:
            raise StructureError("projection needs a group-ring lattice over the same group")
        vecs = [space.vector(self.ambient.element(v)) for v in self.basis()]
        return IdealLattice.from_vectors(space, vecs, close_under_group=False)

    def is_group_stable(self) -> bool:
        gens = self.ambient.group.generators()
        return all(self.contains(self.ambient.translate(g, v)) for v in self.basis() for g in gens)

    def index_in(self, other: "IdealLattice") -> int:
        """[other : self] for self contained in other with the same rank."""
        self._same(other)
        if self.rank != other.rank or not other.contains_lattice(self):
            raise ValueError("index needs a finite-index sublattice")
        if self.rank == 0:
            return 1
        coords = [other.coordinates(v) for v in self.basis()]
        return abs(det(coords))

    def p_part_equals(self, other: "IdealLattice", p: int) -> bool:
        """Equality after tensoring with Z_(p)."""
        self._same(other)
        s = self + other
        if not (self.rank == other.rank == s.rank):
            return False
        return self.index_in(s) % p != 0 and other.index_in(s) % p != 0

    def contains_p_local(self, x, p: int) -> bool:
        """Whether n·x lies in the lattice for some n prime to p."""
        vec = self.ambient.vector(x) if not isinstance(x, (list, tuple)) else x
        s = IdealLattice.from_vectors(self.ambient, self.basis() + [vec], close_under_group=False)
        if s.rank != self.rank:
            return False
        return self.index_in(s) % p != 0

    def distinguishing_vector(self, other: "IdealLattice"):
        """A basis vector of one lattice missing from the other, or None."""
        for v in self.basis():
            if not other.contains(v):
                return ("left", v)
        for v in other.basis():
            if not self.contains(v):
                return ("right", v)
        return None

    def to_json(self) -> dict:
        return {
            "ambient": [str(k) for k in self.ambient.key[:1]] + [str(d) for d in self.ambient.group.invariant_factors],
            "denominator": str(self.denominator),
            "hnf": [[str(x) for x in r] for r in self.rows],
        }

    def __repr__(self):
        return f"IdealLattice(rank={self.rank}, denominator={self.denominator}, rows={self.rows})"


def ideal_from_generators(gens: list[GroupRingElement], ambient=None) -> IdealLattice:
    """Z-span of {g·x : g in G, x in gens} in Hermite normal form."""
    if ambient is None:
        if not gens:
            raise ValueError("an ambient space is required for an empty generator list")
        ambient = GroupRingSpace(gens[0].group)
    if not gens:
        return IdealLattice.zero(ambient)
    for x in gens:
        if isinstance(x, GroupRingElement) and x.group != ambient.group:
            raise StructureError("generators live on different groups")
    return IdealLattice.from_vectors(ambient, [ambient.vector(x) for x in gens])


def ideal_ops(a: IdealLattice, b, op: str, p: int | None = None):
    if op == "membership":
        return a.contains(b)
    if op == "equals":
        a._same(b)
        return a == b
    if op == "product":
        return a * b
    if op == "p_part_equals":
        return a.p_part_equals(b, p)
    raise ValueError(f"unknown operation {op!r}")


def odd_product_det(x: GroupRingElement, conj) -> Fraction:
    """Determinant of multiplication by x on Q[G]/(1 + conj)."""
    return det_fraction(MinusSpace(x.group, conj).multiplication_matrix(x))


__all__ = [
    "AbelianGroupRealization",
    "Character",
    "CoefficientRing",
    "FiniteAbelianGroup",
    "GaloisStructure",
    "GroupHom",
    "GroupRingElement",
    "GroupRingSpace",
    "IdealLattice",
    "MinusElement",
    "MinusSpace",
    "QQ",
    "StructureError",
    "ZZ",
    "canonical_elements",
    "enumerate_characters",
    "groupring_arith",
    "ideal_from_generators",
    "ideal_ops",
    "integers_mod",
    "minus_projection",
    "odd_characters",
    "odd_product_det",
    "root_of_unity_mod",
]
