"""Eisenstein series over Q: Dirichlet characters, L-values, q-expansions,
Hecke operators, the smoothed series W_k, cusp constant terms and congruences.

Coefficient rings are small adaptor objects so one QExpansion class serves
rational, cyclotomic, Z/p^m and group-ring coefficients. Cyclotomic values are
dense tuples in Z[x]/(x^N - 1) (the "exponent" representation); equality falls
back to reduction modulo the N-th cyclotomic polynomial only when the tuples differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm, prod

from .algebra_core import (
    AbelianGroupRealization,
    Character,
    GroupRingElement,
    GroupRingSpace,
    IdealLattice,
    QQ,
    enumerate_characters,
    integers_mod,
    root_of_unity_mod,
)
from .cyclotomic import Cyclotomic
from .numtheory import bernoulli_poly, divisors, kronecker_symbol, prime_factors, primerange
from .stickelberger import AbelianFieldQ, _greedy_generators, _units, theta


# ---------------------------------------------------------------------------
# Dirichlet characters


@lru_cache(maxsize=None)
def unit_group(n: int) -> AbelianGroupRealization:
    """(Z/n)^* as a realized finite abelian group."""
    one = 1 % n
    return AbelianGroupRealization(_greedy_generators(n), lambda x, y: x * y % n, one)


class DirichletCharacter:
    """chi(a) = zeta_N^{e(a)} for a prime to the modulus, 0 otherwise.

    ``table[a]`` is e(a) for a in [0, n) prime to n and None otherwise; N is the
    order of the character, so the exponents are reduced.
    """

    __slots__ = ("modulus", "order", "table", "_conductor")

    def __init__(self, modulus: int, order: int, table):
        table = tuple(None if e is None else e % order for e in table)
        if len(table) != modulus:
            raise ValueError("character table has the wrong length")
        # shrink N to the true order
        g = order
        for e in table:
            if e is not None:
                g = gcd(g, e)
        if g > 1:
            order //= g
            table = tuple(None if e is None else e // g for e in table)
        self.modulus = modulus
        self.order = order
        self.table = table
        self._conductor = None

    @classmethod
    def trivial(cls, n: int = 1) -> "DirichletCharacter":
        return cls(n, 1, [0 if gcd(a, n) == 1 else None for a in range(n)])

    @classmethod
    def from_group_character(cls, n: int, chi: Character) -> "DirichletCharacter":
        real = unit_group(n)
        return cls(n, chi.modulus, [chi.exponent_at(real.vec(a)) if gcd(a, n) == 1 else None for a in range(n)])

    @classmethod
    def kronecker(cls, D: int) -> "DirichletCharacter":
        """The quadratic character a -> (D/a) of modulus |D|."""
        n = abs(D)
        vals = []
        for a in range(n):
            if gcd(a, n) != 1:
                vals.append(None)
            else:
                vals.append(0 if kronecker_symbol(D, a if a > 0 else n) == 1 else 1)
        return cls(n, 2, vals)

    @classmethod
    def of_field(cls, field_: AbelianFieldQ, chi: Character) -> "DirichletCharacter":
        """chi composed with the Artin map (Z/f)^* -> G of an abelian field."""
        f = field_.conductor
        return cls(f, chi.modulus, [chi.exponent_at(field_.sigma(a)) if gcd(a, f) == 1 else None for a in range(f)])

    def exponent(self, a: int):
        return self.table[a % self.modulus]

    def __call__(self, a: int) -> Cyclotomic:
        e = self.exponent(a)
        if e is None:
            return Cyclotomic.rational(0)
        return Cyclotomic.root(self.order, e)

    def is_even(self) -> bool:
        return self.exponent(-1) == 0

    def is_odd(self) -> bool:
        return not self.is_even()

    @property
    def parity(self) -> int:
        return 0 if self.is_even() else 1

    def is_trivial(self) -> bool:
        return self.order == 1

    def conductor(self) -> int:
        if self._conductor is None:
            n = self.modulus
            for d in divisors(n):
                if all(self.table[a] == 0 for a in _units(n) if (a - 1) % d == 0):
                    self._conductor = d
                    break
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive(self) -> "DirichletCharacter":
        f = self.conductor()
        n = self.modulus
        vals = []
        for b in range(f):
            if gcd(b, f) != 1:
                vals.append(None)
                continue
            a = b
            while gcd(a, n) != 1:
                a += f
            vals.append(self.table[a % n])
        return DirichletCharacter(f, self.order, vals)

    def extend(self, m: int) -> "DirichletCharacter":
        """The character induced to a multiple m of the modulus."""
        if m % self.modulus:
            raise ValueError("new modulus must be a multiple of the old one")
        return DirichletCharacter(m, self.order, [self.table[a % self.modulus] if gcd(a, m) == 1 else None for a in range(m)])

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, self.order, [None if e is None else -e for e in self.table])

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        m = lcm(self.modulus, other.modulus)
        n = lcm(self.order, other.order)
        a, b = self.extend(m), other.extend(m)
        vals = []
        for x, y in zip(a.table, b.table):
            vals.append(None if x is None else x * (n // self.order) + y * (n // other.order))
        return DirichletCharacter(m, n, vals)

    def value_in(self, ring, a: int):
        e = self.exponent(a)
        if e is None:
            return ring.zero()
        return ring.root(e, self.order)

    def key(self):
        return (self.modulus, self.order, self.table)

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, order {self.order})"

    def to_json(self) -> dict:
        return {
            "modulus": str(self.modulus),
            "order": str(self.order),
            "values": [None if e is None else str(e) for e in self.table],
        }


def dirichlet_characters(n: int) -> list[DirichletCharacter]:
    """All characters modulo n, in a fixed order."""
    real = unit_group(n)
    return [DirichletCharacter.from_group_character(n, chi) for chi in enumerate_characters(real.group)]


def primitive_characters(f: int, parity: int | None = None) -> list[DirichletCharacter]:
    out = []
    seen = set()
    for chi in dirichlet_characters(f):
        if chi.is_primitive() and (parity is None or chi.parity == parity) and chi.key() not in seen:
            seen.add(chi.key())
            out.append(chi)
    return out


# ---------------------------------------------------------------------------
# L-values


def generalized_bernoulli(chi: DirichletCharacter, k: int):
    f = chi.modulus
    total = Cyclotomic.rational(0)
    for a in range(1, f + 1):
        e = chi.exponent(a)
        if e is None:
            continue
        total = total + Cyclotomic.root(chi.order, e) * (Fraction(f) ** (k - 1) * bernoulli_poly(k, Fraction(a, f)))
    return _simplify(total)


def _simplify(x: Cyclotomic):
    return x.rational_value() if x.is_rational() else x


def L_at_nonpositive(chi: DirichletCharacter, k: int):
    """L(chi, 1 - k) = -B_{k,chi}/k for a primitive chi and k >= 1."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not chi.is_primitive():
        raise ValueError("character is not primitive; pass chi.primitive()")
    return _simplify(Cyclotomic._coerce(generalized_bernoulli(chi, k)) * Fraction(-1, k))


def smoothed_L_value(chi: DirichletCharacter, S=(), T=()):
    """L_{S,T}(chi, 0) for the primitive character attached to chi."""
    prim = chi.primitive()
    val = Cyclotomic._coerce(L_at_nonpositive(prim, 1))
    for p in S:
        val = val * (1 - prim(p))
    for ell in T:
        val = val * (1 - prim(ell) * ell)
    return _simplify(val)


# ---------------------------------------------------------------------------
# coefficient rings


class RationalRing:
    name = "rationals"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        return Fraction(x)

    def root(self, e, n):
        e %= n
        if e == 0:
            return Fraction(1)
        if 2 * e == n:
            return Fraction(-1)
        raise ValueError("non-real root of unity in the rational ring")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, q):
        return a * q

    def eq(self, a, b):
        return a == b

    def encode(self, a):
        return _enc(a)


class CyclotomicRing:
    """Q(zeta_N) in the dense exponent representation."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"cyclotomic-exponent({n})"

    def zero(self):
        return (0,) * self.n

    def one(self):
        return (1,) + (0,) * (self.n - 1)

    def coerce(self, x):
        if isinstance(x, tuple):
            return x
        if isinstance(x, Cyclotomic):
            if self.n % x.n:
                raise ValueError("value does not live in this cyclotomic field")
            out = [0] * self.n
            s = self.n // x.n
            for j, c in x.coeffs.items():
                out[j * s] += c
            return tuple(out)
        return (x,) + (0,) * (self.n - 1)

    def root(self, e, n):
        if self.n % n:
            raise ValueError("root of unity outside the ring")
        out = [0] * self.n
        out[(e * (self.n // n)) % self.n] = 1
        return tuple(out)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        n = self.n
        sa = [(i, x) for i, x in enumerate(a) if x]
        sb = [(j, y) for j, y in enumerate(b) if y]
        if len(sa) > len(sb):
            sa, sb = sb, sa
        out = [0] * n
        for i, x in sa:
            for j, y in sb:
                out[(i + j) % n] += x * y
        return tuple(out)

    def scale(self, a, q):
        return tuple(x * q for x in a)

    def to_cyclotomic(self, a) -> Cyclotomic:
        return Cyclotomic(self.n, {i: x for i, x in enumerate(a) if x})

    def eq(self, a, b):
        if a == b:
            return True
        return self.to_cyclotomic(self.sub(a, b)).is_zero()

    def encode(self, a):
        c = self.to_cyclotomic(a).canonical()
        return [_enc(x) for x in c]


class ModRing:
    """Z/M."""

    def __init__(self, modulus: int, p: int | None = None):
        self.modulus = modulus
        self.p = p
        self.name = f"Z/{modulus}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.modulus

    def coerce(self, x):
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def root(self, e, n):
        if self.p is None:
            raise ValueError("roots of unity need a prime power modulus")
        m = _log(self.modulus, self.p)
        return pow(root_of_unity_mod(n, self.p, m), e % n, self.modulus)

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def scale(self, a, q):
        return a * self.coerce(q) % self.modulus

    def eq(self, a, b):
        return (a - b) % self.modulus == 0

    def encode(self, a):
        return str(a % self.modulus)


class GroupRingModRing:
    """(Z/M)[G]."""

    def __init__(self, group, modulus: int):
        self.group = group
        self.modulus = modulus
        self.cring = integers_mod(modulus)
        self.name = f"Z/{modulus}[G]"

    def zero(self):
        return GroupRingElement.zero(self.group, self.cring)

    def one(self):
        return GroupRingElement.scalar(self.group, 1, self.cring)

    def coerce(self, x):
        if isinstance(x, GroupRingElement):
            return x.change_ring(self.cring)
        return GroupRingElement.scalar(self.group, x, self.cring)

    def basis(self, g):
        return GroupRingElement.basis(self.group, g, self.cring)

    def root(self, e, n):
        raise ValueError("group ring coefficients carry no scalar roots of unity")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, q):
        return a * self.cring.coerce(q)

    def eq(self, a, b):
        return a == b

    def encode(self, a):
        return [str(c) for c in a.coeffs]


def _log(n, p):
    m = 0
    while n % p == 0:
        n //= p
        m += 1
    if n != 1:
        raise ValueError("modulus is not a power of p")
    return m


def _enc(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def ring_for(chi: DirichletCharacter):
    return RationalRing() if chi.order <= 2 else CyclotomicRing(chi.order)


# ---------------------------------------------------------------------------
# q-expansions


class FamilyCharacter:
    """The canonical character (Z/n)^* -> G -> (Z/M)[G] of an abelian field of conductor n."""

    def __init__(self, field_: AbelianFieldQ):
        self.field = field_
        self.modulus = field_.conductor

    def value_in(self, ring: GroupRingModRing, a: int):
        if gcd(a, self.modulus) != 1:
            return ring.zero()
        return ring.basis(self.field.sigma(a))

    def key(self):
        return ("family",) + tuple(self.field.key())

    def __eq__(self, other):
        return isinstance(other, FamilyCharacter) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class QExpansion:
    """A q-expansion given by a coefficient rule, with cached coefficients.

    ``provider(m)`` returns c(m) for m >= 1 as a ring value; ``constant`` is c_0.
    """

    def __init__(self, weight, level, nebentypus, ring, provider, constant, label=""):
        self.weight = weight
        self.level = level
        self.nebentypus = nebentypus
        self.ring = ring
        self._provider = provider
        self.constant = constant
        self.label = label
        self._cache = {}

    def coefficient(self, m: int):
        if m == 0:
            return self.constant
        if m < 0:
            raise ValueError("negative index")
        v = self._cache.get(m)
        if v is None:
            v = self._provider(m)
            self._cache[m] = v
        return v

    __getitem__ = coefficient

    def prefix(self, n: int) -> list:
        """[c(1), ..., c(n)]"""
        return [self.coefficient(m) for m in range(1, n + 1)]

    def _same_shape(self, other):
        if self.ring.name != other.ring.name:
            raise ValueError("q-expansions over different coefficient rings")
        if (self.weight, self.level) != (other.weight, other.level) or _neb_key(self.nebentypus) != _neb_key(other.nebentypus):
            raise ValueError("q-expansions with different weight, level or nebentypus")

    def __add__(self, other):
        self._same_shape(other)
        r = self.ring
        return QExpansion(
            self.weight, self.level, self.nebentypus, r,
            lambda m: r.add(self.coefficient(m), other.coefficient(m)),
            r.add(self.constant, other.constant),
        )

    def __sub__(self, other):
        self._same_shape(other)
        r = self.ring
        return QExpansion(
            self.weight, self.level, self.nebentypus, r,
            lambda m: r.sub(self.coefficient(m), other.coefficient(m)),
            r.sub(self.constant, other.constant),
        )

    def scale(self, c):
        """Multiply by a scalar c (a ring value, int or Fraction)."""
        r = self.ring
        if isinstance(c, (int, Fraction)):
            return QExpansion(self.weight, self.level, self.nebentypus, r,
                              lambda m: r.scale(self.coefficient(m), c), r.scale(self.constant, c))
        return QExpansion(self.weight, self.level, self.nebentypus, r,
                          lambda m: r.mul(c, self.coefficient(m)), r.mul(c, self.constant))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self.ring.name != other.ring.name:
            raise ValueError("q-expansions over different coefficient rings")
        r = self.ring
        neb = _neb_product(self.nebentypus, other.nebentypus)

        def provider(m):
            acc = r.zero()
            for i in range(m + 1):
                acc = r.add(acc, r.mul(self.coefficient(i), other.coefficient(m - i)))
            return acc

        return QExpansion(self.weight + other.weight, lcm(self.level, other.level), neb, r,
                          provider, r.mul(self.constant, other.constant))

    def __pow__(self, e: int):
        if e < 1:
            raise ValueError("only positive powers")
        out = None
        base = self
        while e:
            if e & 1:
                out = base if out is None else out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def reduce_mod(self, p: int, m: int) -> "QExpansion":
        """Coefficients reduced to Z/p^m (roots of unity via Teichmuller lifts)."""
        mod = p**m
        target = ModRing(mod, p)
        src = self.ring

        def red(v):
            if isinstance(src, CyclotomicRing):
                w = root_of_unity_mod(src.n, p, m)
                return sum(target.coerce(x) * pow(w, i, mod) for i, x in enumerate(v) if x) % mod
            return target.coerce(v)

        return QExpansion(self.weight, self.level, self.nebentypus, target,
                          lambda k: red(self.coefficient(k)), red(self.constant), self.label)

    def truncated(self, n: int) -> "QExpansion":
        """A copy whose coefficients beyond n are cached eagerly; useful before repeated products."""
        for k in range(1, n + 1):
            self.coefficient(k)
        return self

    def to_json(self, n: int = 20) -> dict:
        return {
            "metadata": {
                "weight": str(self.weight),
                "level": str(self.level),
                "ring": self.ring.name,
                "label": self.label,
            },
            "constant": self.ring.encode(self.constant),
            "coefficients": [self.ring.encode(c) for c in self.prefix(n)],
        }


def _neb_key(chi):
    return None if chi is None else chi.key()


def _neb_product(a, b):
    if isinstance(a, DirichletCharacter) and isinstance(b, DirichletCharacter):
        return a * b
    if a is None or (isinstance(a, DirichletCharacter) and a.is_trivial()):
        return b
    if b is None or (isinstance(b, DirichletCharacter) and b.is_trivial()):
        return a
    raise ValueError("cannot multiply these nebentypus characters")


def _depletion_level(c0: int, S) -> int:
    return c0 * prod(p for p in set(S) if c0 % p)


def eisenstein_qexp(k: int, psi: DirichletCharacter | None = None, S=(), family: AbelianFieldQ | None = None,
                    modulus: int | None = None) -> QExpansion:
    """The S-stabilized series E_k(psi_S, 1), or the group-ring family when ``family`` is given.

    c(m) = sum over r | m of psi_S(m/r) r^{k-1}. For the family the coefficients
    lie in (Z/modulus)[G], G the Galois group of ``family``, and S is the set of
    primes dividing its conductor.
    """
    if family is not None:
        return _family_qexp(k, family, modulus)
    psi = psi or DirichletCharacter.trivial()
    prim = psi.primitive()
    if prim.parity != k % 2:
        raise ValueError(f"parity of the character does not match the weight {k}")
    S = tuple(sorted(set(S)))
    c0 = prim.modulus
    n = _depletion_level(c0, S)
    neb = prim.extend(n)
    ring = ring_for(prim)
    bad = prod(S) * c0

    def psi_S(x):
        if gcd(x, bad) != 1:
            return None
        return prim.exponent(x)

    if isinstance(ring, RationalRing):
        def provider(m):
            acc = 0
            for r in _divisors(m):
                e = psi_S(m // r)
                if e is not None:
                    acc += -(r ** (k - 1)) if e else r ** (k - 1)
            return Fraction(acc)
    else:
        N = ring.n

        def provider(m):
            acc = [0] * N
            for r in _divisors(m):
                e = psi_S(m // r)
                if e is not None:
                    acc[e] += r ** (k - 1)
            return tuple(acc)

    # constant term at infinity (2^{-n} with n = [F:Q] = 1)
    if k > 1 and n != 1:
        const = ring.zero()
    elif k > 1:
        const = ring.coerce(Fraction(1, 2) * Fraction(L_at_nonpositive(prim.conjugate(), k)))
    else:
        const = ring.coerce(_half(smoothed_L_value(prim, S=S)))
    label = f"E_{k}(psi_S,1) cond {c0} S {list(S)}"
    return QExpansion(k, n, neb, ring, provider, const, label)


def _half(x):
    return x * Fraction(1, 2)


@lru_cache(maxsize=1 << 16)
def _divisors(m: int) -> tuple[int, ...]:
    return tuple(divisors(m))


def _family_qexp(k: int, field_: AbelianFieldQ, modulus: int | None) -> QExpansion:
    if modulus is None:
        raise ValueError("the family form needs a coefficient modulus p^m")
    n = field_.conductor
    ring = GroupRingModRing(field_.group, modulus)
    neb = FamilyCharacter(field_)
    elems = field_.group.elements()
    index = {g: i for i, g in enumerate(elems)}

    def provider(m):
        coeffs = [0] * len(elems)
        for r in _divisors(m):
            q = m // r
            if gcd(q, n) == 1:
                coeffs[index[field_.sigma(q)]] += r ** (k - 1)
        return GroupRingElement(field_.group, coeffs, ring.cring)

    S = prime_factors(n)
    if k > 1:
        const = ring.zero()
    else:
        th = theta(field_, S=S).element
        const = ring.coerce(th.sharp() * Fraction(1, 2))
    return QExpansion(k, n, neb, ring, provider, const, f"E_{k}(family) conductor {n}")


def specialize(f: QExpansion, chi: Character, p: int, m: int) -> QExpansion:
    """Apply a character of G (values in Z/p^m by Teichmuller lifts) to a group-ring family."""
    if not isinstance(f.ring, GroupRingModRing):
        raise ValueError("only group-ring families can be specialized")
    mod = p**m
    if f.ring.modulus != mod:
        raise ValueError("family modulus does not match p^m")
    target = ModRing(mod, p)

    def ev(x):
        return chi.evaluate_element_mod(x.change_ring(QQ), p, m)

    neb = DirichletCharacter.of_field(f.nebentypus.field, chi)
    return QExpansion(f.weight, f.level, neb, target, lambda j: ev(f.coefficient(j)), ev(f.constant), f.label + " specialized")


# ---------------------------------------------------------------------------
# Hecke operators


def _nebentypus_value(f: QExpansion, a: int):
    return f.nebentypus.value_in(f.ring, a)


def hecke_T(f: QExpansion, ell: int) -> QExpansion:
    """T_ell for a prime ell not dividing the level."""
    if f.level % ell == 0 or len(prime_factors(ell)) != 1 or ell < 2 or ell != prime_factors(ell)[0]:
        raise ValueError(f"T_{ell} needs a prime not dividing the level {f.level}")
    r = f.ring
    k = f.weight
    chi_l = _nebentypus_value(f, ell)
    w = r.scale(chi_l, ell ** (k - 1))

    def provider(m):
        v = f.coefficient(m * ell)
        if m % ell == 0:
            v = r.add(v, r.mul(w, f.coefficient(m // ell)))
        return v

    const = r.add(f.constant, r.mul(w, f.constant))
    return QExpansion(k, f.level, f.nebentypus, r, provider, const, f.label + f"|T_{ell}")


def hecke_U(f: QExpansion, q: int) -> QExpansion:
    """U_q for a prime q dividing the level."""
    if f.level % q:
        raise ValueError(f"U_{q} needs q dividing the level {f.level}")
    return QExpansion(f.weight, f.level, f.nebentypus, f.ring, lambda m: f.coefficient(m * q), f.constant, f.label + f"|U_{q}")


def diamond(f: QExpansion, d: int) -> QExpansion:
    if gcd(d, f.level) != 1:
        raise ValueError("diamond operator needs d prime to the level")
    return f.scale(_nebentypus_value(f, d))


def raise_level(f: QExpansion, q: int) -> QExpansion:
    """f|q: c(m, f|q) = c(m/q, f) if q | m, else 0; constant term unchanged."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    r = f.ring
    neb = f.nebentypus.extend(f.level * q) if isinstance(f.nebentypus, DirichletCharacter) else f.nebentypus
    return QExpansion(f.weight, f.level * q, neb, r,
                      lambda m: f.coefficient(m // q) if m % q == 0 else r.zero(), f.constant, f.label + f"|{q}")


def hecke_action(f: QExpansion, op: str, arg: int) -> QExpansion:
    ops = {"T": hecke_T, "U": hecke_U, "diamond": diamond, "raise_level": raise_level}
    if op not in ops:
        raise ValueError(f"unknown operator {op}")
    return ops[op](f, arg)


# ---------------------------------------------------------------------------
# the smoothed series W_k


@dataclass(frozen=True)
class SmoothingSetup:
    """Data psi, P, T with c0 = cond(psi), c = lcm(c0, P), t = prod T and n = c t."""

    k: int
    psi: DirichletCharacter
    P: int
    T: tuple

    def __post_init__(self):
        if not self.T:
            raise ValueError("T must be nonempty")
        c0 = self.psi.conductor()
        for ell in self.T:
            if c0 % ell == 0:
                raise ValueError(f"{ell} divides the conductor of psi")
            if self.P % ell == 0:
                raise ValueError(f"{ell} divides P")
        if self.psi.parity != self.k % 2:
            raise ValueError("parity of psi does not match k")

    @property
    def prim(self) -> DirichletCharacter:
        return self.psi.primitive()

    @property
    def c0(self) -> int:
        return self.psi.conductor()

    @property
    def c(self) -> int:
        return lcm(self.c0, self.P)

    @property
    def t(self) -> int:
        return prod(self.T)

    @property
    def n(self) -> int:
        return self.c * self.t

    def t_divisors(self) -> list[tuple]:
        T = sorted(self.T)
        return [sub for r in range(len(T) + 1) for sub in combinations(T, r)]


def w_modified(k: int, psi: DirichletCharacter, P: int = 1, T=()) -> QExpansion:
    """W_k(psi_P, 1) = sum over m | t of mu(m) psi(m) m^k E_k(psi_P, 1)|m."""
    setup = SmoothingSetup(k, psi, P, tuple(sorted(set(T))))
    prim = setup.prim
    E = eisenstein_qexp(k, prim, S=prime_factors(P) if P > 1 else ())
    r = E.ring
    n = setup.n
    terms = []
    for sub in setup.t_divisors():
        m = prod(sub)
        coef = r.scale(prim.value_in(r, m), (-1) ** len(sub) * m**k)
        g = raise_level(E, m)
        terms.append((coef, g))
    neb = prim.extend(n)

    def provider(j):
        acc = r.zero()
        for coef, g in terms:
            acc = r.add(acc, r.mul(coef, g.coefficient(j)))
        return acc

    const = r.zero()
    for coef, g in terms:
        const = r.add(const, r.mul(coef, g.constant))
    W = QExpansion(k, n, neb, r, provider, const, f"W_{k} cond {setup.c0} P {P} T {list(setup.T)}")
    for ell in setup.T:
        expected = r.sub(E.coefficient(ell), r.scale(prim.value_in(r, ell), ell**k))
        if not r.eq(W.coefficient(ell), expected):
            raise AssertionError(f"W_k coefficient identity fails at {ell}")
    return W


# ---------------------------------------------------------------------------
# cusps, Gauss sums and constant terms


@dataclass(frozen=True)
class CuspDatum:
    """The cusp a/c of level n (F = Q, so t_lambda = d = b_A = 1 and c_A = |c|)."""

    level: int
    a: int
    c: int

    def __post_init__(self):
        if gcd(self.a, self.c) != 1:
            raise ValueError("cusp a/c must be in lowest terms")

    @property
    def c_ideal(self) -> int:
        return abs(self.c)

    def in_C0(self, b: int) -> bool:
        return gcd(b, self.c_ideal) == 1

    def in_Cinf(self, b: int) -> bool:
        return self.c_ideal % b == 0

    def to_json(self):
        return {"level": str(self.level), "a": str(self.a), "c": str(self.c)}


class GaussSumSymbol:
    """The Gauss sum tau(psi) = sum over a mod f of psi(a) zeta_f^a, kept formal unless evaluated."""

    def __init__(self, psi: DirichletCharacter):
        self.psi = psi.primitive()

    def value(self) -> Cyclotomic:
        f = self.psi.modulus
        total = Cyclotomic.rational(0)
        for a in range(f):
            e = self.psi.exponent(a)
            if e is not None:
                total = total + Cyclotomic.root(self.psi.order, e) * Cyclotomic.root(f, a)
        return total

    def check_norm_identity(self) -> bool:
        """tau(psi) tau(conj psi) = psi(-1) f."""
        other = GaussSumSymbol(self.psi.conjugate())
        sign = 1 if self.psi.is_even() else -1
        return self.value() * other.value() == sign * self.psi.modulus


@dataclass
class ConstantTerm:
    """plain + tau * tau(psi), with tau(psi) a formal Gauss sum."""

    plain: Cyclotomic
    tau: Cyclotomic
    psi: DirichletCharacter

    @classmethod
    def zero(cls, psi):
        z = Cyclotomic.rational(0)
        return cls(z, z, psi)

    def __add__(self, other):
        return ConstantTerm(self.plain + other.plain, self.tau + other.tau, self.psi)

    def scale(self, c):
        return ConstantTerm(self.plain * c, self.tau * c, self.psi)

    def is_zero(self) -> bool:
        return self.plain.is_zero() and self.tau.is_zero()

    def __eq__(self, other):
        return isinstance(other, ConstantTerm) and self.plain == other.plain and self.tau == other.tau

    def value(self) -> Cyclotomic:
        return self.plain + self.tau * GaussSumSymbol(self.psi).value()

    def to_json(self):
        return {"plain": _cyc_json(self.plain), "tau": _cyc_json(self.tau)}


def _cyc_json(x: Cyclotomic):
    return [_enc(c) for c in x.canonical()] if not x.is_rational() else _enc(x.rational_value())


def _C(x) -> Cyclotomic:
    return Cyclotomic._coerce(x)


class _CuspContext:
    def __init__(self, setup: SmoothingSetup, cusp: CuspDatum):
        if cusp.level != setup.n:
            raise ValueError(f"cusp level {cusp.level} does not match the form level {setup.n}")
        self.s = setup
        self.A = cusp
        self.psi = setup.prim
        self.k = setup.k

    def chi(self, x):
        return self.psi(x)

    def chi_inv(self, x):
        return self.psi.conjugate()(x)

    def J(self, m_primes):
        return [ell for ell in m_primes if self.A.in_C0(ell)]

    def Jc(self, m_primes):
        return [ell for ell in m_primes if self.A.in_Cinf(ell)]

    def sgn_chi_c(self):
        """sgn(N(-c)) psi(c_A), with the convention psi^{-1}(a) when c = 0."""
        c = self.A.c
        if c == 0:
            return self.chi_inv(self.A.a)
        return self.chi(abs(c)) * (1 if -c > 0 else -1)

    def L_inv(self, k):
        return _C(L_at_nonpositive(self.psi.conjugate(), k)) * Fraction(1, 2)

    def L(self):
        return _C(L_at_nonpositive(self.psi, 1)) * Fraction(1, 2)

    def L_ST(self):
        return _C(smoothed_L_value(self.psi, T=self.s.T)) * Fraction(1, 2)

    def P_primes(self):
        return prime_factors(self.s.P) if self.s.P > 1 else []

    def P_factor(self, k):
        out = _C(1)
        for p in self.P_primes():
            out = out * (1 - self.chi(p) * Fraction(1, p**k))
        return out

    def P_factor_plain(self):
        return _C(prod((1 - Fraction(1, p) for p in self.P_primes()), start=Fraction(1)))


def constant_term_E(setup: SmoothingSetup, m_primes, cusp: CuspDatum) -> ConstantTerm:
    """Normalized constant term of E_k(psi_P, 1)|m at the cusp, m the product of ``m_primes``."""
    ctx = _CuspContext(setup, cusp)
    psi, k, s = ctx.psi, ctx.k, setup
    if any(ell not in s.T for ell in m_primes):
        raise ValueError("m must divide t")
    J, Jc = ctx.J(m_primes), ctx.Jc(m_primes)
    in_C0c = cusp.in_C0(s.c)
    in_Cinf = cusp.in_Cinf(s.c0)
    jfac = _C(1)
    for ell in J:
        jfac = jfac * Fraction(1, ell**k)
    for ell in Jc:
        jfac = jfac * ctx.chi_inv(ell)
    if k > 1:
        if not in_C0c:
            return ConstantTerm.zero(psi)
        tau = ctx.sgn_chi_c() * ctx.L_inv(k) * ctx.P_factor(k) * jfac * Fraction(1, s.c0**k)
        return ConstantTerm(_C(0), tau, psi)
    # weight one
    tau_part = _C(0)
    plain = _C(0)
    inf_term = ctx.L() * ctx.P_factor_plain()
    for ell in J:
        inf_term = inf_term * (ctx.chi(ell) * ell).inverse()
    if in_C0c and in_Cinf:
        tau_part = ctx.L_inv(1) * ctx.P_factor(1) * jfac
        plain = inf_term
    elif in_Cinf:
        plain = inf_term
    elif in_C0c:
        tau_part = ctx.sgn_chi_c() * ctx.L_inv(1) * ctx.P_factor(1) * jfac * Fraction(1, s.c0)
    return ConstantTerm(plain, tau_part, psi)


def _smoothing_product(ctx, primes, first, second):
    out = _C(1)
    for ell in primes:
        out = out * (first(ell) if ctx.A.in_C0(ell) else second(ell))
    return out


def constant_term_W(setup: SmoothingSetup, cusp: CuspDatum) -> ConstantTerm:
    """Normalized constant term of W_k(psi_P, 1) at the cusp (odd k)."""
    ctx = _CuspContext(setup, cusp)
    psi, k, s = ctx.psi, ctx.k, setup
    if k % 2 == 0:
        raise ValueError("W_k constant terms are tabulated for odd k")
    T = sorted(s.T)
    if k > 1:
        if not cusp.in_C0(s.c):
            return ConstantTerm.zero(psi)
        prodT = _smoothing_product(ctx, T, lambda ell: 1 - ctx.chi(ell), lambda ell: _C(1 - ell**k))
        tau = ctx.sgn_chi_c() * ctx.L_inv(k) * ctx.P_factor(k) * prodT * Fraction(1, s.c0**k)
        return ConstantTerm(_C(0), tau, psi)
    Pp = ctx.P_primes()
    prodT1 = _smoothing_product(ctx, T, lambda ell: 1 - ctx.chi(ell), lambda ell: _C(1 - ell))
    prodP = _smoothing_product(ctx, Pp, lambda p: _C(1 - Fraction(1, p)), lambda p: 1 - ctx.chi(p))
    if s.c0 == 1:
        in_C0P = cusp.in_C0(s.P)
        in_Cinft = cusp.in_Cinf(s.t)
        if in_C0P and in_Cinft:
            plain = ctx.L_ST() * ctx.P_factor_plain()
            tau = ctx.L_inv(1) * ctx.P_factor(1) * prod((1 - ell for ell in T), start=1)
            return ConstantTerm(plain, tau, psi)
        if in_C0P:
            return ConstantTerm(_C(0), ctx.L_inv(1) * ctx.P_factor(1) * prodT1, psi)
        if in_Cinft:
            return ConstantTerm(ctx.L_ST() * prodP, _C(0), psi)
        return ConstantTerm.zero(psi)
    if cusp.in_Cinf(s.c0 * s.t):
        a = cusp.a
        sgn = 1 if a > 0 else -1
        return ConstantTerm(ctx.chi_inv(a) * sgn * ctx.L_ST() * prodP, _C(0), psi)
    if cusp.in_C0(s.c):
        tau = ctx.sgn_chi_c() * ctx.L_inv(1) * ctx.P_factor(1) * prodT1 * Fraction(1, s.c0)
        return ConstantTerm(_C(0), tau, psi)
    return ConstantTerm.zero(psi)


def constant_term_eval(form: str, setup: SmoothingSetup, cusp: CuspDatum, m_primes=()) -> ConstantTerm:
    """Dispatch: form is "E" (E_k(psi_P,1)|m), or "W" (W_k or W_1 by the weight)."""
    if form == "E":
        return constant_term_E(setup, tuple(m_primes), cusp)
    if form == "W":
        return constant_term_W(setup, cusp)
    raise ValueError(f"unknown form {form}")


def constant_term_W_from_E(setup: SmoothingSetup, cusp: CuspDatum) -> ConstantTerm:
    """The Mobius combination of the E_k(psi_P,1)|m constant terms defining W_k."""
    psi = setup.prim
    total = ConstantTerm.zero(psi)
    for sub in setup.t_divisors():
        m = prod(sub)
        w = psi(m) * ((-1) ** len(sub) * m**setup.k)
        total = total + constant_term_E(setup, sub, cusp).scale(w)
    return total


def mobius_identity(T, J, psi_values: dict, k: int) -> tuple[Cyclotomic, Cyclotomic]:
    """Both sides of sum_{m | t} mu(m) prod_{J_m^c} l^k prod_{J_m} psi(l) = prod_J (1 - psi(l)) prod_{J^c} (1 - l^k)."""
    T = sorted(T)
    J = set(J)
    lhs = _C(0)
    for r in range(len(T) + 1):
        for sub in combinations(T, r):
            term = _C((-1) ** r)
            for ell in sub:
                term = term * (psi_values[ell] if ell in J else _C(ell**k))
            lhs = lhs + term
    rhs = _C(1)
    for ell in T:
        rhs = rhs * ((1 - psi_values[ell]) if ell in J else _C(1 - ell**k))
    return lhs, rhs


# ---------------------------------------------------------------------------
# congruences


@dataclass
class CongruenceResult:
    holds: bool
    first_failure: int | None = None

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "first_failure": None if self.first_failure is None else str(self.first_failure)}


def _divisible(x, n: int) -> bool:
    """Is the (p-integral) value x divisible by n?"""
    if isinstance(x, Fraction) or isinstance(x, int):
        x = Fraction(x)
        return gcd(x.denominator, n) == 1 and x.numerator % n == 0
    if isinstance(x, Cyclotomic):
        return all(_divisible(c, n) for c in x.canonical())
    if isinstance(x, GroupRingElement):
        return all(_divisible(Fraction(c), n) for c in x.coeffs)
    raise TypeError(f"cannot test divisibility of {type(x)}")


def _diff_value(f: QExpansion, g: QExpansion, m: int):
    r = f.ring
    d = r.sub(f.coefficient(m), g.coefficient(m))
    if isinstance(r, CyclotomicRing):
        return r.to_cyclotomic(d)
    return d


def congruence_check(f: QExpansion, g: QExpansion, modulus, N: int, constant: bool = True) -> CongruenceResult:
    """Check c(m, f) = c(m, g) modulo an integer or modulo an IdealLattice, for m <= N (and m = 0)."""
    if f.ring.name != g.ring.name:
        raise ValueError("q-expansions over different coefficient rings")
    start = 0 if constant else 1
    for m in range(start, N + 1):
        d = _diff_value(f, g, m)
        if isinstance(modulus, IdealLattice):
            x = d.change_ring(QQ) if isinstance(d, GroupRingElement) else d
            ok = modulus.contains(x)
        elif isinstance(f.ring, ModRing):
            ok = d % gcd(modulus, f.ring.modulus) == 0
        elif isinstance(f.ring, GroupRingModRing):
            ok = all(c % gcd(modulus, f.ring.modulus) == 0 for c in d.coeffs)
        else:
            ok = _divisible(d, modulus)
        if not ok:
            return CongruenceResult(False, m)
    return CongruenceResult(True, None)


def normalized_eisenstein(k: int) -> QExpansion:
    """Level one E_k scaled to constant term 1."""
    E = eisenstein_qexp(k)
    return E.scale(1 / E.constant)


def v_form_power(p: int, a: int, N: int) -> QExpansion:
    """E_{p-1}^{p^a} reduced modulo p^{a+1}, with coefficients precomputed through N."""
    E = normalized_eisenstein(p - 1).reduce_mod(p, a + 1).truncated(N)
    return _truncated_pow(E, p**a, N)


def _truncated_pow(f: QExpansion, e: int, N: int) -> QExpansion:
    r = f.ring
    power = e
    base = [f.constant] + f.prefix(N)
    out = [r.one()] + [r.zero()] * N

    def mul(x, y):
        z = [r.zero()] * (N + 1)
        for i, xi in enumerate(x):
            if r.eq(xi, r.zero()):
                continue
            for j in range(N + 1 - i):
                z[i + j] = r.add(z[i + j], r.mul(xi, y[j]))
        return z

    while e:
        if e & 1:
            out = mul(out, base)
        e >>= 1
        if e:
            base = mul(base, base)
    table = out

    def provider(m):
        if m > N:
            raise ValueError(f"coefficient {m} beyond the truncation {N}")
        return table[m]

    return QExpansion(f.weight, f.level, f.nebentypus, r, provider, table[0], f.label + f"^{power}")


# ---------------------------------------------------------------------------
# the Eisenstein ideal shadow


def eisenstein_ideal_shadow(field_: AbelianFieldQ, S, T, p: int, N: int, ell_max: int = 50) -> dict:
    """Membership of (l^{k-1} - 1)(1 - sigma_l) in the ideal (Theta_{S,T}) for k = 1 + (p-1) p^N.

    The element is the difference between the T_l eigenvalue of the family form,
    1 + psi(l) l^{k-1}, and the Eisenstein eigenvalue l^{k-1} + psi(l).
    """
    th = theta(field_, S=S, T=T).element
    lat = IdealLattice.from_vectors(_ambient(field_.group), [th.coeffs])
    k = 1 + (p - 1) * p**N
    level = field_.conductor * prod(T)
    out = {}
    for ell in _primes_upto(ell_max):
        if level % ell == 0:
            continue
        sig = GroupRingElement.basis(field_.group, field_.sigma(ell))
        one = GroupRingElement.scalar(field_.group, 1)
        lk = ell ** (k - 1)
        x = (one + sig * lk) - (one * lk + sig)
        out[ell] = lat.contains(x)
    return {"k": k, "membership": out}


def _ambient(group):
    return GroupRingSpace(group)


def _primes_upto(n):
    return list(primerange(2, n + 1))


__all__ = [
    "CongruenceResult",
    "ConstantTerm",
    "CuspDatum",
    "CyclotomicRing",
    "DirichletCharacter",
    "FamilyCharacter",
    "GaussSumSymbol",
    "GroupRingModRing",
    "ModRing",
    "QExpansion",
    "RationalRing",
    "SmoothingSetup",
    "L_at_nonpositive",
    "congruence_check",
    "constant_term_E",
    "constant_term_W",
    "constant_term_W_from_E",
    "constant_term_eval",
    "diamond",
    "dirichlet_characters",
    "eisenstein_ideal_shadow",
    "eisenstein_qexp",
    "generalized_bernoulli",
    "hecke_T",
    "hecke_U",
    "hecke_action",
    "mobius_identity",
    "normalized_eisenstein",
    "primitive_characters",
    "raise_level",
    "smoothed_L_value",
    "specialize",
    "unit_group",
    "v_form_power",
    "w_modified",
]

