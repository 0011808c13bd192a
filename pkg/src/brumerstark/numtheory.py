"""Small number-theoretic helpers on top of sympy's factorization routines."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from sympy import divisors, factorint, isprime, primerange

__all__ = [
    "bernoulli",
    "bernoulli_poly",
    "crt",
    "divisors",
    "factorint",
    "is_fundamental_discriminant",
    "isprime",
    "kronecker",
    "kronecker_symbol",
    "mobius",
    "odd_part",
    "prime_factors",
    "primerange",
    "squarefree",
    "valuation",
]


def prime_factors(n: int) -> list[int]:
    return sorted(factorint(abs(n)))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        return 0
    while n % 2 == 0:
        n //= 2
    return n


def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d|p) for a prime p."""
    if n == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % n
    if r == 0:
        return 0
    return 1 if pow(r, (n - 1) // 2, n) == 1 else -1


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d|n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    out = 1
    for p, e in factorint(n).items():
        out *= kronecker(d, p) ** e
    return out


def crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g = gcd(m, n)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        t = ((r - x) // g * pow(m // g, -1, n // g)) % (n // g)
        x += m * t
        m = m // g * n
        x %= m
    return x


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return tuple(b)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number with B_1 = -1/2."""
    return _bernoulli_table(n)[n]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_j C(n, j) B_j x^(n-j)."""
    b = _bernoulli_table(n)
    return sum((comb(n, j) * b[j] * x ** (n - j) for j in range(n + 1)), Fraction(0))
