"""Exact arithmetic in cyclotomic fields Q(ζ_N).

A number is stored as a rational combination of powers ζ_N^j, 0 <= j < N, that
is, as an element of Q[x]/(x^N - 1). Equality reduces modulo the N-th
cyclotomic polynomial, so representations need not be canonical.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import divisors

from .intlinalg import det_fraction, solve_rational


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    # x^n - 1 divided by Φ_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return q


def _reduce(coeffs: dict[int, Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    a = [Fraction(0)] * max(n, deg)
    for j, c in coeffs.items():
        a[j] += c
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            for j, pj in enumerate(phi):
                a[i - deg + j] -= c * pj
    return tuple(a[:deg])


class Cyclotomic:
    """An element of Q(ζ_N)."""

    __slots__ = ("n", "coeffs", "_canon")

    def __init__(self, n: int, coeffs: dict[int, Fraction] | None = None):
        self.n = n
        self.coeffs = {j % n: Fraction(c) for j, c in (coeffs or {}).items() if c}
        self._canon = None

    @classmethod
    def rational(cls, q, n: int = 1) -> "Cyclotomic":
        return cls(n, {0: Fraction(q)})

    @classmethod
    def root(cls, n: int, j: int = 1) -> "Cyclotomic":
        return cls(n, {j % n: Fraction(1)})

    def _lift(self, m: int) -> dict[int, Fraction]:
        s = m // self.n
        return {j * s: c for j, c in self.coeffs.items()}

    @staticmethod
    def _coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        return Cyclotomic(1, {0: Fraction(x)})

    def _common(self, other):
        other = self._coerce(other)
        m = self.n * other.n // gcd(self.n, other.n)
        return m, self._lift(m), other._lift(m)

    def __add__(self, other):
        m, a, b = self._common(other)
        out = dict(a)
        for j, c in b.items():
            out[j] = out.get(j, 0) + c
        return Cyclotomic(m, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, {j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, {j: c * other for j, c in self.coeffs.items()})
        m, a, b = self._common(other)
        out: dict[int, Fraction] = {}
        for i, x in a.items():
            for j, y in b.items():
                k = (i + j) % m
                out[k] = out.get(k, 0) + x * y
        return Cyclotomic(m, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyclotomic.rational(1, self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self) -> "Cyclotomic":
        return Cyclotomic(self.n, {(-j) % self.n: c for j, c in self.coeffs.items()})

    def galois(self, a: int) -> "Cyclotomic":
        """Apply ζ ↦ ζ^a (a coprime to n)."""
        return Cyclotomic(self.n, {(a * j) % self.n: c for j, c in self.coeffs.items()})

    def norm(self) -> Fraction:
        return det_fraction(self._mult_matrix())

    def _mult_matrix(self):
        deg = len(cyclotomic_poly(self.n)) - 1
        rows = []
        for i in range(deg):
            rows.append(list((self * Cyclotomic.root(self.n, i)).canonical()))
        return rows

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1 or len(self.coeffs) == 1 and self.is_rational():
            return Cyclotomic.rational(1 / self.rational_value(), self.n)
        # solve x * self = 1 in the power basis
        rows = self._mult_matrix()
        deg = len(rows)
        target = [1] + [0] * (deg - 1)
        x = solve_rational(rows, target)
        return Cyclotomic(self.n, {i: c for i, c in enumerate(x)})

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def canonical(self) -> tuple[Fraction, ...]:
        if self._canon is None:
            self._canon = _reduce(self.coeffs, self.n)
        return self._canon

    def is_zero(self) -> bool:
        return not any(self.canonical())

    def is_rational(self) -> bool:
        c = self.canonical()
        return not any(c[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        c = self.canonical()
        return c[0] if c else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero()

    # equal values may live in different Q(ζ_N), so there is no cheap canonical hash
    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return f"Cyclotomic({self.rational_value()})"
        terms = [f"{c}*z{self.n}^{j}" for j, c in sorted(self.coeffs.items())]
        return "Cyclotomic(" + " + ".join(terms) + ")"
