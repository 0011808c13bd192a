"""Imaginary quadratic fields: forms, ideals, ray class groups and S-units.

Elements are a + b·omega with omega = (D + sqrt(D))/2, so omega^2 = D·omega - (D^2 - D)/4.
Ideals are Z-lattices written in the coordinate order (omega, 1) and kept in
row Hermite normal form: rows (g, g·x0) and (0, g·a) describe g·[a, x0 + omega].
The ideal [a, (-b + sqrt(D))/2] corresponds to the form (a, b, c).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm

from .algebra_core import AbelianGroupRealization, FiniteAbelianGroup
from .fitting import GaloisModule
from .intlinalg import hnf, left_kernel, xgcd
from .numtheory import is_fundamental_discriminant, kronecker, prime_factors, valuation

CONJ_GROUP = FiniteAbelianGroup((2,))


class QuadElement:
    """a + b·omega with rational a, b."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field_: "ImagQuadField", a, b=0):
        self.field = field_
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.field.D != self.field.D:
                raise ValueError("elements of different fields")
            return other
        return QuadElement(self.field, other)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.field.D
        k = Fraction(d * d - d, 4)
        return QuadElement(
            self.field,
            self.a * o.a - self.b * o.b * k,
            self.a * o.b + self.b * o.a + self.b * o.b * d,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadElement(self.field, self.a + self.b * self.field.D, -self.b)

    def norm(self) -> Fraction:
        d = self.field.D
        return self.a * self.a + self.a * self.b * d + self.b * self.b * Fraction(d * d - d, 4)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.D

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadElement(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = QuadElement(self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def denominator(self) -> int:
        return lcm(self.a.denominator, self.b.denominator)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadElement(self.field, other)
        if not isinstance(other, QuadElement):
            return NotImplemented
        return self.field.D == other.field.D and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.field.D, self.a, self.b))

    def key(self):
        return (self.a, self.b)

    def __repr__(self):
        return f"({self.a} + {self.b}*w)"

    def to_json(self) -> dict:
        return {"a": _enc(self.a), "b": _enc(self.b), "basis": "1, (D+sqrt(D))/2"}


def _enc(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduce(self) -> "QuadForm":
        a, b, c = self.a, self.b, self.c
        if a <= 0:
            raise ValueError("only positive definite forms are supported")
        while True:
            # normalize b into (-a, a]
            if not -a < b <= a:
                k = (a - b) // (2 * a)
                c = c + k * b + k * k * a
                b = b + 2 * k * a
            if a > c:
                a, b, c = c, -b, a
                continue
            if a == c and b < 0:
                b = -b
            return QuadForm(a, b, c)

    def inverse(self) -> "QuadForm":
        return QuadForm(self.a, -self.b, self.c).reduce()

    def compose(self, other: "QuadForm") -> "QuadForm":
        """Gauss composition (Dirichlet's united forms), reduced."""
        if self.disc != other.disc:
            raise ValueError("forms of different discriminants")
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, c2 = other.a, other.b, other.c
        if a1 > a2:
            a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
        s = (b1 + b2) // 2
        n = b2 - s
        if a2 % a1 == 0:
            y1, d = 0, a1
        else:
            d, u, _ = xgcd(a2, a1)
            y1 = u
        if s % d == 0:
            y2, x2, d1 = -1, 0, d
        else:
            d1, x2, y2 = xgcd(s, d)
            y2 = -y2
        v1, v2 = a1 // d1, a2 // d1
        r = (y1 * y2 * n - x2 * c2) % v1
        b3 = b2 + 2 * v2 * r
        a3 = v1 * v2
        c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
        out = QuadForm(a3, b3, c3)
        if out.disc != self.disc:
            raise AssertionError("composition changed the discriminant")
        return out.reduce()

    def to_json(self):
        return [str(self.a), str(self.b), str(self.c)]


def reduced_forms(D: int) -> list[QuadForm]:
    """All primitive reduced forms of discriminant D < 0."""
    out = []
    amax = isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = QuadForm(a, b, c)
            if f.is_reduced() and gcd(gcd(a, b), c) == 1:
                out.append(f)
    return sorted(out)


@dataclass
class FormClassGroup:
    D: int
    forms: list
    realization: AbelianGroupRealization
    module: GaloisModule

    @property
    def order(self) -> int:
        return len(self.forms)

    @property
    def invariants(self) -> tuple[int, ...]:
        return self.realization.group.invariant_factors

    def identity(self) -> QuadForm:
        return principal_form(self.D)

    def vector(self, form: QuadForm) -> tuple[int, ...]:
        return self.realization.vec(form.reduce())

    def form(self, vec) -> QuadForm:
        return self.realization.elem(vec)

    def generator_forms(self) -> list[QuadForm]:
        return [self.form(e) for e in self.realization.group.generators()]

    def to_json(self) -> dict:
        return {
            "D": str(self.D),
            "class_number": str(self.order),
            "invariants": [str(d) for d in self.invariants],
            "forms": [f.to_json() for f in self.forms],
        }


def principal_form(D: int) -> QuadForm:
    b = D % 2
    return QuadForm(1, b, (b * b - D) // 4)


def _check_disc(D: int):
    if D >= 0 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a negative fundamental discriminant")


def form_class_group(D: int) -> FormClassGroup:
    _check_disc(D)
    forms = reduced_forms(D)
    gens: list = []
    span = {principal_form(D)}
    for f in forms:
        if f not in span:
            gens.append(f)
            span = _form_span(gens, D)
    real = AbelianGroupRealization(gens, lambda x, y: x.compose(y), principal_form(D))
    if len(real.elements()) != len(forms):
        raise AssertionError("class group enumeration mismatch")
    group = real.group
    n = group.rank
    # conjugation sends a form class to its inverse
    action = [[[-int(i == j) for j in range(n)] for i in range(n)]]
    module = GaloisModule(CONJ_GROUP, group.invariant_factors, action)
    return FormClassGroup(D, forms, real, module)


def _form_span(gens, D):
    seen = {principal_form(D)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x.compose(g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# ideals


class QuadIdeal:
    """A nonzero integral ideal, stored as the HNF g·[a, x0 + omega]."""

    __slots__ = ("field", "g", "a", "x0")

    def __init__(self, field_: "ImagQuadField", g: int, a: int, x0: int):
        self.field = field_
        self.g, self.a, self.x0 = g, a, x0 % a

    @classmethod
    def from_generators(cls, field_: "ImagQuadField", gens) -> "QuadIdeal":
        d = field_.D
        k = (d * d - d) // 4
        rows = []
        for x in gens:
            x = x if isinstance(x, QuadElement) else QuadElement(field_, x)
            if not x.is_integral():
                raise ValueError("ideal generators must be integral")
            a, b = int(x.a), int(x.b)
            rows.append([b, a])
            rows.append([a + b * d, -b * k])
        h = hnf(rows, 2)
        if len(h) != 2:
            raise ValueError("the zero ideal is not supported")
        (g, gx), (_, ga) = h
        return cls(field_, g, ga // g, gx // g)

    def basis(self) -> tuple[QuadElement, QuadElement]:
        f = self.field
        return (QuadElement(f, self.g * self.x0, self.g), QuadElement(f, self.g * self.a, 0))

    def norm(self) -> int:
        return self.g * self.g * self.a

    def contains(self, x) -> bool:
        x = x if isinstance(x, QuadElement) else QuadElement(self.field, x)
        if not x.is_integral():
            return False
        a, b = int(x.a), int(x.b)
        if b % self.g:
            return False
        t = b // self.g
        rest = a - t * self.g * self.x0
        return rest % (self.g * self.a) == 0

    def __mul__(self, other: "QuadIdeal") -> "QuadIdeal":
        gens = [x * y for x in self.basis() for y in other.basis()]
        return QuadIdeal.from_generators(self.field, gens)

    def __pow__(self, e: int) -> "QuadIdeal":
        if e < 0:
            raise ValueError("negative powers of integral ideals are not supported")
        out = self.field.unit_ideal()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, x: QuadElement) -> "QuadIdeal":
        return QuadIdeal.from_generators(self.field, [x * y for y in self.basis()])

    def conjugate(self) -> "QuadIdeal":
        return QuadIdeal.from_generators(self.field, [y.conjugate() for y in self.basis()])

    def form(self) -> QuadForm:
        """The reduced form of the ideal class."""
        d = self.field.D
        b = -2 * self.x0 - d
        a = self.a
        b = (b + a) % (2 * a) - a
        if b == -a:
            b = a
        c = (b * b - d) // (4 * a)
        return QuadForm(a, b, c).reduce()

    def is_coprime_to(self, n: int) -> bool:
        return gcd(self.norm(), n) == 1

    def key(self):
        return (self.norm(), self.g, self.a, self.x0)

    def __eq__(self, other):
        if not isinstance(other, QuadIdeal):
            return NotImplemented
        return self.field.D == other.field.D and (self.g, self.a, self.x0) == (other.g, other.a, other.x0)

    def __hash__(self):
        return hash((self.field.D, self.g, self.a, self.x0))

    def __repr__(self):
        return f"QuadIdeal({self.g}*[{self.a}, {self.x0} + w])"

    def to_json(self) -> dict:
        return {"g": str(self.g), "a": str(self.a), "x0": str(self.x0), "norm": str(self.norm())}


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of O_K above the rational prime p."""

    p: int
    kind: str  # split, inert or ramified
    ideal: QuadIdeal
    index: int = 0  # 0 or 1 for the two primes above a split p

    @property
    def residue_size(self) -> int:
        return self.p * self.p if self.kind == "inert" else self.p

    @property
    def ramification(self) -> int:
        return 2 if self.kind == "ramified" else 1

    def label(self) -> str:
        return f"{self.p}{'' if self.kind != 'split' else 'ab'[self.index]}"


@dataclass
class SplittingResult:
    kind: str
    primes: list

    def to_json(self):
        return {"kind": self.kind, "primes": [q.ideal.to_json() for q in self.primes]}


class ImagQuadField:
    def __init__(self, D: int):
        _check_disc(D)
        self.D = D
        self.w = 6 if D == -3 else 4 if D == -4 else 2

    def __repr__(self):
        return f"ImagQuadField({self.D})"

    @property
    def omega(self) -> QuadElement:
        return QuadElement(self, 0, 1)

    def element(self, a, b=0) -> QuadElement:
        return QuadElement(self, a, b)

    def from_sqrt(self, x, y) -> QuadElement:
        """x + y·sqrt(D)."""
        # sqrt(D) = 2·omega - D
        return QuadElement(self, Fraction(x) - Fraction(y) * self.D, 2 * Fraction(y))

    def unit_ideal(self) -> QuadIdeal:
        return QuadIdeal(self, 1, 1, 0)

    def principal_ideal(self, x: QuadElement) -> QuadIdeal:
        return QuadIdeal.from_generators(self, [x])

    def ideal_of_form(self, f: QuadForm) -> QuadIdeal:
        # [a, (-b + sqrt(D))/2] = [a, omega - (D + b)/2]
        return QuadIdeal(self, 1, f.a, -(self.D + f.b) // 2)

    @cached_property
    def class_group(self) -> FormClassGroup:
        return form_class_group(self.D)

    def class_vector(self, ideal: QuadIdeal) -> tuple[int, ...]:
        return self.class_group.vector(ideal.form())

    @cached_property
    def roots_of_unity(self) -> list[QuadElement]:
        return elements_of_norm(self.unit_ideal(), 1)

    @cached_property
    def zeta(self) -> QuadElement:
        """A generator of the roots of unity."""
        for z in self.roots_of_unity:
            if all(z**k != 1 for k in range(1, self.w)):
                return z
        raise AssertionError("no primitive root of unity found")

    def primes_above(self, p: int) -> SplittingResult:
        return prime_splitting(self, p)

    def integral_ideals_of_norm(self, n: int) -> list[QuadIdeal]:
        out = []
        d = self.D
        k = (d * d - d) // 4
        for g in range(1, isqrt(n) + 1):
            if n % (g * g):
                continue
            a = n // (g * g)
            for x0 in range(a):
                if (x0 * x0 + x0 * d + k) % a == 0:
                    out.append(QuadIdeal(self, g, a, x0))
        return out

    def smallest_ideal_in_class(self, vec, avoid: int = 1) -> QuadIdeal:
        """Least-norm integral ideal with the given class vector and norm prime to ``avoid``."""
        target = tuple(vec)
        n = 1
        while True:
            if gcd(n, avoid) == 1:
                for I in self.integral_ideals_of_norm(n):
                    if self.class_vector(I) == target:
                        return I
            n += 1


def prime_splitting(field_: ImagQuadField, p: int) -> SplittingResult:
    d = field_.D
    k = kronecker(d, p)
    if k == -1:
        return SplittingResult("inert", [PrimeIdeal(p, "inert", QuadIdeal(field_, p, 1, 0))])
    roots = [x0 for x0 in range(p) if (x0 * x0 + x0 * d + (d * d - d) // 4) % p == 0]
    if k == 0:
        return SplittingResult("ramified", [PrimeIdeal(p, "ramified", QuadIdeal(field_, 1, p, roots[0]))])
    return SplittingResult(
        "split", [PrimeIdeal(p, "split", QuadIdeal(field_, 1, p, r), i) for i, r in enumerate(sorted(roots))]
    )


# ---------------------------------------------------------------------------
# elements of given norm and principal generators


def _norm_form(b1: QuadElement, b2: QuadElement):
    # N(x b1 + y b2) = A x^2 + B x y + C y^2
    A = b1.norm()
    C = b2.norm()
    B = (b1 + b2).norm() - A - C
    return A, B, C


def _lagrange_reduce(b1: QuadElement, b2: QuadElement):
    while True:
        A, B, C = _norm_form(b1, b2)
        if A > C:
            b1, b2 = b2, b1
            continue
        # subtract the nearest multiple of b1 from b2
        q = round(Fraction(B, 2 * A))
        if q == 0:
            return b1, b2
        b2 = b2 - b1 * q


def elements_of_norm(ideal: QuadIdeal, n: int) -> list[QuadElement]:
    """All elements of the ideal with norm exactly n, sorted."""
    b1, b2 = _lagrange_reduce(*ideal.basis())
    A, B, C = _norm_form(b1, b2)
    disc = 4 * A * C - B * B
    xmax = isqrt(int(4 * C * n / disc)) + 1
    ymax = isqrt(int(4 * A * n / disc)) + 1
    out = []
    for x in range(-xmax, xmax + 1):
        for y in range(-ymax, ymax + 1):
            if A * x * x + B * x * y + C * y * y == n:
                out.append(b1 * x + b2 * y)
    return sorted(out, key=lambda e: (e.a, e.b))


@dataclass
class GeneratorResult:
    principal: bool
    generator: QuadElement | None
    class_vector: tuple
    obstruction: tuple | None = None

    def to_json(self) -> dict:
        return {
            "principal": self.principal,
            "generator": self.generator.to_json() if self.generator is not None else None,
            "class": [str(x) for x in self.class_vector],
            "obstruction": None if self.obstruction is None else [str(x) for x in self.obstruction],
        }


def principal_generator(ideal: QuadIdeal, congruence: "Modulus | None" = None) -> GeneratorResult:
    """A generator of the ideal, optionally with generator = 1 modulo ``congruence``."""
    f = ideal.field
    cls = f.class_vector(ideal)
    if any(cls):
        return GeneratorResult(False, None, cls)
    sols = elements_of_norm(ideal, ideal.norm())
    if not sols:
        raise AssertionError("principal ideal without a generator of the right norm")
    if congruence is None:
        return GeneratorResult(True, sols[0], cls)
    for x in sols:
        if congruence.is_one(x):
            return GeneratorResult(True, x, cls)
    return GeneratorResult(True, None, cls, congruence.unit_quotient_class(sols[0]))


# ---------------------------------------------------------------------------
# residue fields and the modulus t


class ResidueField:
    """O/P for a prime P, with a fixed generator of (O/P)^* and discrete logs."""

    def __init__(self, prime: PrimeIdeal):
        self.prime = prime
        self.field = prime.ideal.field
        self.p = prime.p
        self.q = prime.residue_size
        gen = next(x for x in self._elements() if x != self.one and self._order(x) == self.q - 1) if self.q > 2 else self.one
        self.generator = gen
        self._log = {}
        x = self.one
        for k in range(self.q - 1):
            self._log[x] = k
            x = self.mul(x, gen)

    @property
    def one(self):
        return (1, 0) if self.prime.kind == "inert" else 1

    def _elements(self):
        if self.prime.kind == "inert":
            return [(a, b) for a in range(self.p) for b in range(self.p) if (a, b) != (0, 0)]
        return list(range(1, self.p))

    def mul(self, x, y):
        p = self.p
        if self.prime.kind != "inert":
            return x * y % p
        d = self.field.D
        k = (d * d - d) // 4
        a1, b1 = x
        a2, b2 = y
        return ((a1 * a2 - b1 * b2 * k) % p, (a1 * b2 + a2 * b1 + b1 * b2 * d) % p)

    def _pow(self, x, e):
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def _order(self, x):
        n = self.q - 1
        for ell in prime_factors(n):
            while n % ell == 0 and self._pow(x, n // ell) == self.one:
                n //= ell
        return n

    def reduce(self, x: QuadElement):
        """Image of a P-integral element, or None if it lies in P."""
        p = self.p
        den = x.denominator()
        if den % p == 0:
            raise ValueError("element is not integral at the prime")
        inv = pow(den, -1, p)
        a = int(x.a * den) * inv % p
        b = int(x.b * den) * inv % p
        if self.prime.kind == "inert":
            r = (a, b)
            return None if r == (0, 0) else r
        # omega = -x0 modulo P
        r = (a - b * self.prime.ideal.x0) % p
        return r or None

    def log(self, x: QuadElement) -> int:
        r = self.reduce(x)
        if r is None:
            raise ValueError("element is not a unit at the prime")
        return self._log[r]

    def lift_generator(self) -> QuadElement:
        g = self.generator
        if self.prime.kind == "inert":
            return QuadElement(self.field, g[0], g[1])
        return QuadElement(self.field, g)


class Modulus:
    """The product t of the primes above a set T of unramified rational primes."""

    def __init__(self, field_: ImagQuadField, T):
        self.field = field_
        self.T = tuple(sorted(set(int(ell) for ell in T)))
        primes = []
        for ell in self.T:
            sp = prime_splitting(field_, ell)
            if sp.kind == "ramified":
                raise ValueError(f"{ell} ramifies in Q(sqrt({field_.D}))")
            primes.extend(sp.primes)
        self.primes = primes
        self.residues = [ResidueField(q) for q in primes]
        self.orders = [r.q - 1 for r in self.residues]
        self.norm = 1
        for q in primes:
            self.norm *= q.residue_size

    def dlog(self, x: QuadElement) -> tuple[int, ...]:
        return tuple(r.log(x) for r in self.residues)

    def is_one(self, x: QuadElement) -> bool:
        return all(r.reduce(x - 1) is None for r in self.residues) if self.residues else True

    def ideal(self) -> QuadIdeal:
        out = self.field.unit_ideal()
        for q in self.primes:
            out = out * q.ideal
        return out

    def crt_lift(self, i: int) -> QuadElement:
        """An integral element that is the chosen generator mod P_i and 1 mod the other primes."""
        target = self.residues[i]
        others = [r for j, r in enumerate(self.residues) if j != i]
        g = target.lift_generator()
        if not others:
            return g
        # idempotent e in the product m of the other primes with e = 1 mod P_i
        m = self.field.unit_ideal()
        for r in others:
            m = m * r.prime.ideal
        b1, b2 = m.basis()
        for s in range(self.norm + 1):
            for u in range(-s, s + 1):
                for v in {s - abs(u), abs(u) - s}:
                    e = b1 * u + b2 * v
                    if target.reduce(e) == target.one:
                        return g * e + (1 - e)
        raise AssertionError("CRT lift not found")

    def unit_quotient_class(self, x: QuadElement) -> tuple[int, ...]:
        """The class of x in (O/t)^* modulo the image of the roots of unity, as a canonical log vector."""
        best = None
        for z in self.field.roots_of_unity:
            v = tuple(a % n for a, n in zip(self.dlog(x * z), self.orders))
            if best is None or v < best:
                best = v
        return best


# ---------------------------------------------------------------------------
# ray class groups


@dataclass
class RayClassGroup:
    field: ImagQuadField
    modulus: Modulus
    module: GaloisModule
    cl_generators: list  # ideals coprime to t representing the Cl Smith generators
    cl_relations: list  # beta_j with a_j^{d_j} = (beta_j)
    unit_image_order: int
    witnesses: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.module.order

    def _free_vector(self, ideal: QuadIdeal):
        f = self.field
        if not ideal.is_coprime_to(self.modulus.norm):
            raise ValueError("ideal is not coprime to the modulus")
        e = f.class_vector(ideal)
        ds = f.class_group.invariants
        c = [(-x) % d for x, d in zip(e, ds)]
        prod_ideal = ideal
        for a_j, cj in zip(self.cl_generators, c):
            if cj:
                prod_ideal = prod_ideal * (a_j**cj)
        gen = principal_generator(prod_ideal)
        if not gen.principal:
            raise AssertionError("class bookkeeping failed")
        return list(self.modulus.dlog(gen.generator)) + [-x for x in c]

    def class_of_ideal(self, ideal: QuadIdeal) -> tuple[int, ...]:
        return self.module.from_generator_coords(self._free_vector(ideal))

    def class_of_element(self, x: QuadElement) -> tuple[int, ...]:
        """Class of the principal ideal (x) for x prime to t."""
        ncl = len(self.field.class_group.invariants)
        return self.module.from_generator_coords(list(self.modulus.dlog(x)) + [0] * ncl)

    def to_json(self) -> dict:
        return {
            "D": str(self.field.D),
            "T": [str(ell) for ell in self.modulus.T],
            "order": str(self.order),
            "module": self.module.to_json(),
            "cl_generators": [I.to_json() for I in self.cl_generators],
            "unit_image_order": str(self.unit_image_order),
        }


def ray_class_group(field_: ImagQuadField, T) -> RayClassGroup:
    mod = Modulus(field_, T)
    cg = field_.class_group
    ds = list(cg.invariants)
    k = len(mod.primes)
    n = k + len(ds)
    # Cl generators: least-norm ideals coprime to t in each Smith generator class
    gens_cl = [field_.smallest_ideal_in_class(e, mod.norm) for e in cg.realization.group.generators()]
    betas = []
    for a_j, d_j in zip(gens_cl, ds):
        res = principal_generator(a_j**d_j)
        betas.append(res.generator)
    rels = []
    for i, o in enumerate(mod.orders):
        rels.append([o * int(i == j) for j in range(n)])
    zlog = list(mod.dlog(field_.zeta)) if k else []
    rels.append(zlog + [0] * len(ds))
    for j, (beta, d_j) in enumerate(zip(betas, ds)):
        row = [-x for x in mod.dlog(beta)] + [d_j * int(j == t) for t in range(len(ds))]
        rels.append(row)
    # order of the image of the roots of unity in (O/t)^*
    seen = {tuple(a % m for a, m in zip(mod.dlog(z), mod.orders)) for z in field_.roots_of_unity} if k else {()}
    unit_image = len(seen)

    partial = RayClassGroup(field_, mod, None, gens_cl, betas, unit_image)
    action = []
    for i in range(k):
        x = mod.crt_lift(i)
        action.append(list(mod.dlog(x.conjugate())) + [0] * len(ds))
    for a_j in gens_cl:
        action.append(partial._free_vector(a_j.conjugate()))
    module = GaloisModule.from_relations(CONJ_GROUP, n, [r for r in rels if any(r)] or [[0] * n], [action]) if n else GaloisModule(CONJ_GROUP, [], [[]])
    partial.module = module
    expected = cg.order * _prod(mod.orders) // unit_image
    if module.order != expected:
        raise AssertionError(f"ray class group order {module.order} != {expected}")
    partial.witnesses = {"unit_residue_orders": mod.orders, "class_number": cg.order}
    return partial


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


# ---------------------------------------------------------------------------
# S-units


def primes_above_set(field_: ImagQuadField, S) -> list[PrimeIdeal]:
    out = []
    for p in sorted(set(S)):
        out.extend(prime_splitting(field_, p).primes)
    return out


def valuation_at(prime: PrimeIdeal, x: QuadElement) -> int:
    """ord_P(x) for nonzero x."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    den = x.denominator()
    y = x * den
    v = 0
    power = prime.ideal
    while power.contains(y):
        v += 1
        power = power * prime.ideal
    den_v = valuation(den, prime.p) * prime.ramification if den % prime.p == 0 else 0
    return v - den_v


@dataclass
class SUnitData:
    primes: list
    generators: list
    valuations: list  # valuations[i][j] = ord_{primes[j]}(generators[i])

    def to_json(self) -> dict:
        return {
            "primes": [q.label() for q in self.primes],
            "generators": [g.to_json() for g in self.generators],
            "valuations": [[str(x) for x in r] for r in self.valuations],
        }


def s_units(field_: ImagQuadField, S) -> SUnitData:
    """For each prime P above S, a generator of P^{h_P} with h_P the order of its class."""
    primes = primes_above_set(field_, S)
    gens = []
    cg = field_.class_group
    for q in primes:
        h = cg.realization.group.element_order(field_.class_vector(q.ideal))
        gens.append(principal_generator(q.ideal**h).generator)
    vals = [[valuation_at(q, g) for q in primes] for g in gens]
    return SUnitData(primes, gens, vals)


def _ideal_product(field_, primes, exps):
    out = field_.unit_ideal()
    for q, e in zip(primes, exps):
        if e:
            out = out * (q.ideal**e)
    return out


def s_unit_basis(field_: ImagQuadField, S) -> SUnitData:
    """A Z-basis of O_{K,S}^* modulo roots of unity, from the lattice of principal exponent vectors."""
    primes = primes_above_set(field_, S)
    if not primes:
        return SUnitData([], [], [])
    cg = field_.class_group
    ds = list(cg.invariants)
    nw = len(primes)
    rows = [list(field_.class_vector(q.ideal)) for q in primes]
    rows += [[d * int(i == j) for j in range(len(ds))] for i, d in enumerate(ds)]
    if ds:
        ker = left_kernel(rows, len(ds))
        lattice = hnf([r[:nw] for r in ker], nw)
    else:
        lattice = [[int(i == j) for j in range(nw)] for i in range(nw)]
    gens = []
    for v in lattice:
        pos = [max(x, 0) for x in v]
        neg = [max(-x, 0) for x in v]
        i_pos = _ideal_product(field_, primes, pos)
        i_neg = _ideal_product(field_, primes, neg)
        delta = principal_generator(i_pos * i_neg.conjugate()).generator
        gens.append(delta / i_neg.norm())
    vals = [[valuation_at(q, g) for q in primes] for g in gens]
    if [list(r) for r in vals] != [list(r) for r in lattice]:
        raise AssertionError("S-unit valuations do not match the exponent lattice")
    return SUnitData(primes, gens, vals)


__all__ = [
    "FormClassGroup",
    "GeneratorResult",
    "ImagQuadField",
    "Modulus",
    "PrimeIdeal",
    "QuadElement",
    "QuadForm",
    "QuadIdeal",
    "RayClassGroup",
    "ResidueField",
    "SUnitData",
    "SplittingResult",
    "elements_of_norm",
    "form_class_group",
    "prime_splitting",
    "primes_above_set",
    "principal_form",
    "principal_generator",
    "ray_class_group",
    "reduced_forms",
    "s_unit_basis",
    "s_units",
    "valuation_at",
]

