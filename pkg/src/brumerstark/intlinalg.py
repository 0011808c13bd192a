"""Exact integer linear algebra: Hermite and Smith normal forms, kernels, determinants.

Matrices are lists of rows of Python ints. Lattices are row spans.
"""

from __future__ import annotations

from fractions import Fraction


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def vecmat(v, m):
    """Row vector times matrix."""
    if not m:
        return []
    n = len(m[0])
    out = [0] * n
    for vi, row in zip(v, m):
        if vi:
            for j in range(n):
                out[j] += vi * row[j]
    return out


def transpose(a):
    return [list(r) for r in zip(*a)]


def _insert(basis: dict, v: list[int], ncols: int) -> None:
    # fold v into an echelon basis keyed by pivot column
    v = list(v)
    for col in range(ncols):
        if v[col] == 0:
            continue
        b = basis.get(col)
        if b is None:
            if v[col] < 0:
                v = [-x for x in v]
            basis[col] = v
            return
        g, s, t = xgcd(b[col], v[col])
        bq, vq = b[col] // g, v[col] // g
        nb = [s * x + t * y for x, y in zip(b, v)]
        v = [bq * y - vq * x for x, y in zip(b, v)]
        basis[col] = nb


def hnf(rows, ncols: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped. Pivots are positive and entries above a pivot lie
    in [0, pivot).
    """
    rows = [list(map(int, r)) for r in rows]
    if ncols is None:
        if not rows:
            return []
        ncols = len(rows[0])
    basis: dict[int, list[int]] = {}
    for r in rows:
        if any(r):
            _insert(basis, r, ncols)
    piv = sorted(basis)
    out = [basis[c] for c in piv]
    for i, c in enumerate(piv):
        p = out[i][c]
        for j in range(i):
            q = out[j][c] // p
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return out


def pivots(h) -> list[int]:
    out = []
    for r in h:
        for j, x in enumerate(r):
            if x:
                out.append(j)
                break
    return out


def reduce_vector(h, v):
    """Reduce v against an HNF basis; returns (remainder, coefficients)."""
    v = list(v)
    coeffs = [0] * len(h)
    for i, (r, c) in enumerate(zip(h, pivots(h))):
        q = v[c] // r[c]
        if q:
            coeffs[i] = q
            v = [x - q * y for x, y in zip(v, r)]
    return v, coeffs


def solve_in_lattice(h, v):
    """Integer coefficients c with c·h = v, or None if v is not in the span."""
    rem, coeffs = reduce_vector(h, v)
    if any(rem):
        return None
    return coeffs


def left_kernel(a, ncols: int | None = None) -> list[list[int]]:
    """HNF basis of {x in Z^m : x·a = 0} for an m×n integer matrix a."""
    m = len(a)
    if m == 0:
        return []
    n = len(a[0]) if ncols is None else ncols
    aug = [list(a[i]) + [int(i == j) for j in range(m)] for i in range(m)]
    h = hnf(aug, n + m)
    ker = [r[n:] for r in h if not any(r[:n])]
    return hnf(ker, m)


def det(a) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_fraction(a) -> Fraction:
    """Determinant over Q (Gaussian elimination with Fractions)."""
    n = len(a)
    m = [[Fraction(x) for x in r] for r in a]
    d = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            m[k], m[p] = m[p], m[k]
            d = -d
        d *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return d


def solve_rational(a, b):
    """Solve x·a = b over Q for a with full row rank; returns x or None."""
    m, n = len(a), len(a[0]) if a else 0
    # transpose system: a^T x^T = b^T
    rows = [[Fraction(a[i][j]) for i in range(m)] + [Fraction(b[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][m]
    return x


def inverse_unimodular(a) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    n = len(a)
    aug = [list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    m = [[Fraction(x) for x in r] for r in aug]
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    out = [[x for x in r[n:]] for r in m]
    for r in out:
        for x in r:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in out]


def smith_normal_form(a):
    """Return (D, U, V) with U·a·V = D, D diagonal with d_i | d_{i+1}, d_i >= 0."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_comb(i, j, s, t, p, q):
        # row_i <- s*row_i + t*row_j ; row_j <- p*row_i + q*row_j (det s*q - t*p = 1)
        for mat in (d, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [s * x + t * y for x, y in zip(ri, rj)]
            mat[j] = [p * x + q * y for x, y in zip(ri, rj)]

    def col_comb(i, j, s, t, p, q):
        for mat in (d, v):
            for r in mat:
                x, y = r[i], r[j]
                r[i] = s * x + t * y
                r[j] = p * x + q * y

    for k in range(min(m, n)):
        entries = [(abs(d[i][j]), i, j) for i in range(k, m) for j in range(k, n) if d[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(k, i0)
        swap_cols(k, j0)
        while True:
            for i in range(k + 1, m):
                if d[i][k]:
                    if d[i][k] % d[k][k] == 0:
                        row_comb(k, i, 1, 0, -(d[i][k] // d[k][k]), 1)
                        continue
                    g, s, t = xgcd(d[k][k], d[i][k])
                    a_, b_ = d[k][k] // g, d[i][k] // g
                    row_comb(k, i, s, t, -b_, a_)
            for j in range(k + 1, n):
                if d[k][j]:
                    if d[k][j] % d[k][k] == 0:
                        col_comb(k, j, 1, 0, -(d[k][j] // d[k][k]), 1)
                        continue
                    g, s, t = xgcd(d[k][k], d[k][j])
                    a_, b_ = d[k][k] // g, d[k][j] // g
                    col_comb(k, j, s, t, -b_, a_)
            if any(d[i][k] for i in range(k + 1, m)):
                continue
            piv = d[k][k]
            bad = next((i for i in range(k + 1, m) for j in range(k + 1, n) if d[i][j] % piv), None)
            if bad is None:
                break
            # pull the offending row into row k; the next column pass shrinks the pivot
            for mat in (d, u):
                mat[k] = [x + y for x, y in zip(mat[k], mat[bad])]
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return d, u, v


def diagonal(d) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
