"""Fitting ideals, annihilators and finite Galois modules.

Finite modules are Z^n / rowspan(D) with D = diag(d_1, ..., d_n); the group
acts on row vectors from the right, x -> x·A_g, reduced coordinatewise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd, prod

from .algebra_core import (
    ZZ,
    CoefficientRing,
    FiniteAbelianGroup,
    GroupRingElement,
    GroupRingSpace,
    IdealLattice,
    MinusSpace,
    StructureError,
    enumerate_characters,
)
from .cyclotomic import Cyclotomic
from .intlinalg import (
    det,
    diagonal,
    hnf,
    identity,
    inverse_unimodular,
    left_kernel,
    matmul,
    smith_normal_form as _snf,
    solve_in_lattice,
    vecmat,
)
from .numtheory import odd_part, prime_factors, valuation

MAX_GENERATORS = 8


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    d: list
    u: list
    v: list

    @property
    def diagonal(self) -> list[int]:
        return diagonal(self.d)

    def to_json(self) -> dict:
        enc = lambda m: [[str(x) for x in r] for r in m]  # noqa: E731
        return {"D": enc(self.d), "U": enc(self.u), "V": enc(self.v)}


def smith_normal_form(a) -> SmithForm:
    """U·A·V = D with D diagonal, d_i | d_{i+1}, d_i >= 0; verified before returning."""
    if not a or not a[0]:
        raise ValueError("matrix must be nonempty")
    d, u, v = _snf(a)
    if matmul(matmul(u, a), v) != d:
        raise AssertionError("Smith normal form failed to verify")
    if abs(det(u)) != 1 or abs(det(v)) != 1:
        raise AssertionError("Smith transforms are not unimodular")
    diag = diagonal(d)
    for x, y in zip(diag, diag[1:]):
        if (x == 0 and y != 0) or (x and y % x):
            raise AssertionError("Smith diagonal is not a divisibility chain")
    return SmithForm(d, u, v)


# ---------------------------------------------------------------------------
# determinants over commutative rings


def _subset_minors(rows, ncols: int, k: int, zero, one) -> dict:
    """All k×k minors using the given k rows: {column subset: minor}."""
    f = {0: one}
    for r in range(k):
        g = {}
        row = rows[r]
        for mask, val in f.items():
            above = 0
            for j in range(ncols - 1, -1, -1):
                if mask >> j & 1:
                    above += 1
                    continue
                if _is_zero(row[j]) or _is_zero(val):
                    continue
                term = val * row[j]
                if above % 2:
                    term = -term
                nm = mask | (1 << j)
                g[nm] = g[nm] + term if nm in g else term
        f = g
    out = {}
    for mask, val in f.items():
        cols = tuple(j for j in range(ncols) if mask >> j & 1)
        out[cols] = val
    return out


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def ring_det(m, zero=0, one=1):
    """Determinant of a square matrix over any commutative ring."""
    n = len(m)
    if n == 0:
        return one
    return _subset_minors(m, n, n, zero, one).get(tuple(range(n)), zero)


def all_minors(m, k: int, zero=0, one=1) -> dict:
    """{(row subset, column subset): minor} for all k×k minors, lexicographic."""
    nrows, ncols = len(m), len(m[0])
    out = {}
    for rs in combinations(range(nrows), k):
        sub = _subset_minors([m[i] for i in rs], ncols, k, zero, one)
        for cs in combinations(range(ncols), k):
            out[(rs, cs)] = sub.get(cs, zero)
    return out


# ---------------------------------------------------------------------------
# presentations and Fitting ideals


class PresentationMatrix:
    """Relations (rows) among generators (columns) over Z, Z/N or Z[G]."""

    def __init__(self, ring, rows):
        if not rows or not rows[0]:
            raise ValueError("presentation matrix must have positive dimensions")
        self.ring = ring
        if isinstance(ring, FiniteAbelianGroup):
            self.rows = [[_as_group_ring(x, ring) for x in r] for r in rows]
        elif isinstance(ring, CoefficientRing) and ring.kind == "mod":
            self.rows = [[int(x) % ring.modulus for x in r] for r in rows]
        elif ring == ZZ or ring == "ZZ":
            self.ring = ZZ
            self.rows = [[int(x) for x in r] for r in rows]
        else:
            raise StructureError(f"unsupported ring {ring!r}")
        if len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged presentation matrix")

    @property
    def ngens(self) -> int:
        return len(self.rows[0])

    @property
    def nrels(self) -> int:
        return len(self.rows)

    def _zero_one(self):
        if isinstance(self.ring, FiniteAbelianGroup):
            return GroupRingElement.zero(self.ring, ZZ), GroupRingElement.scalar(self.ring, 1, ZZ)
        return 0, 1

    def minors(self, k: int) -> dict:
        zero, one = self._zero_one()
        return all_minors(self.rows, k, zero, one)

    def to_json(self) -> dict:
        if isinstance(self.ring, FiniteAbelianGroup):
            rows = [[x.to_json()["coefficients"] for x in r] for r in self.rows]
            ring = {"group_ring": self.ring.to_json()}
        else:
            rows = [[str(x) for x in r] for r in self.rows]
            ring = str(self.ring)
        return {"ring": ring, "rows": rows}


def _as_group_ring(x, group):
    if isinstance(x, GroupRingElement):
        if x.group != group:
            raise StructureError("entry lives on a different group")
        return x.change_ring(ZZ)
    return GroupRingElement.scalar(group, x, ZZ)


def fitting_ideal(a: PresentationMatrix, i: int = 0):
    """i-th Fitting ideal: the ideal of (n-i)×(n-i) minors, n = number of generators.

    Over Z the non-negative generator is returned, over Z/N the generator
    dividing N, over Z[G] an ``IdealLattice``. Fitt^i is the unit ideal when
    n - i <= 0.
    """
    if i < 0:
        raise ValueError("Fitting index must be non-negative")
    n = a.ngens
    if n > MAX_GENERATORS:
        raise ValueError(f"at most {MAX_GENERATORS} generators are supported, got {n}")
    k = n - i
    group_ring = isinstance(a.ring, FiniteAbelianGroup)
    if k <= 0:
        if group_ring:
            return IdealLattice.unit(GroupRingSpace(a.ring))
        return 1
    if k > a.nrels:
        minors = []
    else:
        minors = list(a.minors(k).values())
    if group_ring:
        space = GroupRingSpace(a.ring)
        if not minors:
            return IdealLattice.zero(space)
        return IdealLattice.from_vectors(space, [space.vector(x) for x in minors])
    g = reduce(gcd, minors, 0)
    if a.ring.kind == "mod":
        return gcd(g, a.ring.modulus)
    return g


# ---------------------------------------------------------------------------
# compound matrices and higher adjugates


def compound_matrix(a, r: int, zero=0, one=1):
    """C_r(A): r×r minors indexed by lexicographic row and column subsets."""
    m, n = len(a), len(a[0])
    rs_list = list(combinations(range(m), r))
    cs_list = list(combinations(range(n), r))
    minors = all_minors(a, r, zero, one)
    return [[minors[(rs, cs)] for cs in cs_list] for rs in rs_list]


def higher_adjugate(a, r: int, zero=0, one=1):
    """adj_r(A) with adj_r(A)·C_r(A) = det(A)·I.

    Entry (J, I) is the signed complementary minor det A[I^c, J^c].
    """
    n = len(a)
    subsets = list(combinations(range(n), r))
    out = []
    for jset in subsets:
        jc = [c for c in range(n) if c not in jset]
        row = []
        for iset in subsets:
            ic = [c for c in range(n) if c not in iset]
            sub = [[a[x][y] for y in jc] for x in ic]
            minor = ring_det(sub, zero, one)
            if (sum(iset) + sum(jset)) % 2:
                minor = -minor
            row.append(minor)
        out.append(row)
    return out


def compound_and_adjugate(a, r: int, zero=0, one=1):
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if not 1 <= r <= n:
        raise ValueError(f"r must lie in [1, {n}]")
    c = compound_matrix(a, r, zero, one)
    adj = higher_adjugate(a, r, zero, one)
    d = ring_det(a, zero, one)
    size = len(c)
    for i in range(size):
        for j in range(size):
            s = zero
            for t in range(size):
                s = s + adj[i][t] * c[t][j]
            expect = d if i == j else zero
            if s != expect:
                raise AssertionError("higher adjugate identity failed")
    return c, adj


# ---------------------------------------------------------------------------
# finite Galois modules


def _reduce_vec(v, d):
    return tuple(x % m for x, m in zip(v, d))


class GaloisModule:
    """A finite abelian group Z/d_1 + ... + Z/d_n with an action of G.

    ``action[k]`` is the integer matrix of the k-th generator of G on row
    vectors. Invariant factors are the Smith invariants (each >= 2).
    """

    def __init__(self, group: FiniteAbelianGroup, invariants, action):
        self.group = group
        self.invariants = tuple(int(d) for d in invariants)
        if any(d < 2 for d in self.invariants):
            raise ValueError("invariant factors must be at least 2")
        if any(b % a for a, b in zip(self.invariants, self.invariants[1:])):
            raise ValueError("invariant factors must form a divisibility chain")
        n = len(self.invariants)
        if len(action) != group.rank:
            raise ValueError("one action matrix per group generator is required")
        self.action = [
            tuple(tuple(int(x) % self.invariants[j] for j, x in enumerate(row)) for row in a) for a in action
        ]
        for a in self.action:
            if len(a) != n or any(len(r) != n for r in a):
                raise ValueError("action matrix has the wrong shape")
        self._mat_cache: dict = {}
        # (V, kept columns) mapping free-generator coordinates x to x·V restricted
        self.basis_change = None
        self._check_action()

    # construction --------------------------------------------------------

    @classmethod
    def from_relations(cls, group: FiniteAbelianGroup, ngens: int, relations, action) -> "GaloisModule":
        """Z^ngens / rowspan(relations) with the action given on the free generators."""
        h = hnf(relations, ngens) if relations else []
        if len(h) < ngens:
            raise ValueError("module is infinite")
        for a in action:
            for r in h:
                if solve_in_lattice(h, vecmat(r, a)) is None:
                    raise ValueError("relations are not stable under the action")
        sf = _snf(h)
        d, v = sf[0], sf[2]
        keep = [i for i in range(ngens) if d[i][i] != 1]
        vinv = inverse_unimodular(v)
        new_action = []
        for a in action:
            full = matmul(matmul(vinv, a), v)
            new_action.append([[full[i][j] for j in keep] for i in keep])
        mod = cls(group, [d[i][i] for i in keep], new_action)
        mod.basis_change = (v, keep)
        return mod

    @classmethod
    def trivial_action(cls, group: FiniteAbelianGroup, invariants) -> "GaloisModule":
        n = len(invariants)
        return cls(group, invariants, [identity(n) for _ in range(group.rank)])

    def _relation_rows(self):
        n = len(self.invariants)
        return [[d * int(i == j) for j in range(n)] for i, d in enumerate(self.invariants)]

    def _check_action(self):
        n = len(self.invariants)
        rels = self._relation_rows()
        mats = self.action
        for a in mats:
            for r in rels:
                if any(x % d for x, d in zip(vecmat(r, a), self.invariants)):
                    raise ValueError("action matrix does not preserve the module relations")
        for a, b in product(mats, mats):
            if self._mat_reduce(matmul(a, b)) != self._mat_reduce(matmul(b, a)):
                raise ValueError("action matrices do not commute")
        for k, a in enumerate(mats):
            order = self.group.invariant_factors[k]
            power = identity(n)
            for _ in range(order):
                power = matmul(power, a)
            if self._mat_reduce(power) != self._mat_reduce(identity(n)):
                raise ValueError("action matrix has the wrong order")

    def _mat_reduce(self, m):
        return tuple(tuple(x % d for x, d in zip(row, self.invariants)) for row in m)

    # basic structure -----------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    @property
    def ngens(self) -> int:
        return len(self.invariants)

    def is_zero(self) -> bool:
        return not self.invariants

    def elements(self):
        return [tuple(v) for v in product(*(range(d) for d in self.invariants))]

    def reduce(self, v):
        return _reduce_vec(v, self.invariants)

    def from_generator_coords(self, x):
        """Coordinates of an element given on the generators used in ``from_relations``."""
        v, keep = self.basis_change
        y = vecmat(x, v)
        return self.reduce([y[i] for i in keep])

    def group_matrix(self, g):
        """Integer matrix of the group element g (a vector in the group's coordinates)."""
        g = self.group.reduce(g)
        if g not in self._mat_cache:
            n = self.ngens
            m = identity(n)
            for k, e in enumerate(g):
                for _ in range(e):
                    m = matmul(m, self.action[k])
            self._mat_cache[g] = [list(r) for r in self._mat_reduce(m)]
        return self._mat_cache[g]

    def ring_matrix(self, x: GroupRingElement):
        """Integer matrix of a group-ring element with integral coefficients."""
        n = self.ngens
        out = [[0] * n for _ in range(n)]
        for g, c in x.items():
            c = Fraction(c)
            if c.denominator != 1:
                raise StructureError("only integral group-ring elements act on a Z-module")
            a = self.group_matrix(g)
            for i in range(n):
                for j in range(n):
                    out[i][j] += int(c) * a[i][j]
        return out

    def act(self, g, v):
        return self.reduce(vecmat(v, self.group_matrix(g)))

    def apply(self, x: GroupRingElement, v):
        return self.reduce(vecmat(v, self.ring_matrix(x)))

    # sub- and quotient modules -------------------------------------------

    def _orbit_vectors(self, vectors):
        out = []
        for v in vectors:
            for g in self.group.elements():
                out.append(list(vecmat(v, self.group_matrix(g))))
        return out

    def submodule_lattice(self, vectors):
        """Preimage in Z^n of the Z[G]-submodule generated by ``vectors``."""
        return hnf(self._orbit_vectors(vectors) + self._relation_rows(), self.ngens)

    def _module_on_lattice(self, lat) -> "GaloisModule":
        # module L / D for a full-rank lattice L containing the relation lattice D
        n = self.ngens
        if n == 0:
            return self
        rels = [solve_in_lattice(lat, r) for r in self._relation_rows()]
        action = []
        for a in self.action:
            action.append([solve_in_lattice(lat, vecmat(b, a)) for b in lat])
        if any(r is None for r in rels) or any(c is None for a in action for c in a):
            raise AssertionError("lattice is not a submodule")
        return GaloisModule.from_relations(self.group, n, rels, action)

    def submodule(self, vectors) -> "GaloisModule":
        if self.ngens == 0:
            return self
        return self._module_on_lattice(self.submodule_lattice(vectors))

    def quotient(self, vectors) -> "GaloisModule":
        n = self.ngens
        if n == 0:
            return self
        rels = self._orbit_vectors(vectors) + self._relation_rows()
        return GaloisModule.from_relations(self.group, n, rels, [list(map(list, a)) for a in self.action])

    def kernel_lattice(self, f):
        n = self.ngens
        stacked = [list(r) for r in f] + self._relation_rows()
        ker = left_kernel(stacked, n)
        return hnf([r[:n] for r in ker] + self._relation_rows(), n)

    def kernel(self, f) -> "GaloisModule":
        """Kernel of the endomorphism x -> x·f (f must commute with the action)."""
        if self.ngens == 0:
            return self
        return self._module_on_lattice(self.kernel_lattice(f))

    def image(self, f) -> "GaloisModule":
        return self.submodule([list(r) for r in f])

    def cokernel(self, f) -> "GaloisModule":
        return self.quotient([list(r) for r in f])

    def scalar_matrix(self, c: int):
        return [[c * int(i == j) for j in range(self.ngens)] for i in range(self.ngens)]

    def p_part(self, p: int) -> "GaloisModule":
        if self.ngens == 0:
            return self
        e = self.exponent
        return self.kernel(self.scalar_matrix(p ** valuation(e, p)))

    def odd_part(self) -> "GaloisModule":
        if self.ngens == 0:
            return self
        return self.kernel(self.scalar_matrix(odd_part(self.exponent)))

    def minus_part(self, conj) -> "GaloisModule":
        """M / (1 + conj)M."""
        if self.ngens == 0:
            return self
        one = GroupRingElement.scalar(self.group, 1, ZZ)
        x = one + GroupRingElement.basis(self.group, conj, ZZ)
        return self.cokernel(self.ring_matrix(x))

    def plus_part(self, conj) -> "GaloisModule":
        if self.ngens == 0:
            return self
        one = GroupRingElement.scalar(self.group, 1, ZZ)
        x = one - GroupRingElement.basis(self.group, conj, ZZ)
        return self.cokernel(self.ring_matrix(x))

    def dual(self) -> "GaloisModule":
        """Hom(M, Q/Z) with the contragredient action (g·phi)(m) = phi(g^{-1} m)."""
        d = self.invariants
        n = self.ngens
        action = []
        for k in range(self.group.rank):
            ginv = self.group.neg(self.group.generators()[k])
            b = self.group_matrix(ginv)
            c = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    # the coefficient c_j of phi_j feeds c'_i via B[i][j]·d_i/d_j
                    val = Fraction(b[i][j] * d[i], d[j])
                    if val.denominator != 1:
                        raise AssertionError("dual action is not integral")
                    c[j][i] = int(val)
            action.append(c)
        return GaloisModule(self.group, d, action)

    def sharp_twist(self) -> "GaloisModule":
        """Same group with g acting as g^{-1}."""
        action = [self.group_matrix(self.group.neg(g)) for g in self.group.generators()]
        return GaloisModule(self.group, self.invariants, action)

    # group-ring presentations ----------------------------------------------

    def zgroup_generators(self):
        """Greedy Z[G]-generators among the standard basis vectors."""
        n = self.ngens
        gens = []
        span = hnf(self._relation_rows(), n)
        for i in range(n):
            e = [int(i == j) for j in range(n)]
            if solve_in_lattice(span, e) is None:
                gens.append(e)
                span = self.submodule_lattice(gens)
        return gens

    def zgroup_presentation(self) -> PresentationMatrix:
        """A presentation of M over Z[G] with greedily reduced relations."""
        g = self.group
        els = g.elements()
        order = g.order
        if self.ngens == 0:
            return PresentationMatrix(g, [[GroupRingElement.scalar(g, 1, ZZ)]])
        gens = self.zgroup_generators()
        s = len(gens)
        images = [list(vecmat(m, self.group_matrix(h))) for m in gens for h in els]
        ker = left_kernel(images + self._relation_rows(), self.ngens)
        relvecs = hnf([r[: s * order] for r in ker], s * order)

        def translate(vec, h):
            out = [0] * (s * order)
            for k in range(s):
                for gi, x in enumerate(els):
                    c = vec[k * order + gi]
                    if c:
                        out[k * order + g.index(g.add(x, h))] += c
            return out

        kept = []
        span: list = []
        for r in relvecs:
            if span and solve_in_lattice(span, r) is not None:
                continue
            kept.append(r)
            span = hnf(span + [translate(r, h) for h in els], s * order)
        rows = [
            [GroupRingElement(g, r[k * order:(k + 1) * order], ZZ) for k in range(s)]
            for r in kept
        ]
        return PresentationMatrix(g, rows)

    def fitting_ideal(self, i: int = 0) -> IdealLattice:
        return fitting_ideal(self.zgroup_presentation(), i)

    def annihilator(self) -> IdealLattice:
        return annihilator(self)

    def to_json(self) -> dict:
        return {
            "invariants": [str(d) for d in self.invariants],
            "action": [[[str(x) for x in r] for r in a] for a in self.action],
        }

    def __repr__(self):
        return f"GaloisModule(invariants={list(self.invariants)}, action={[list(map(list, a)) for a in self.action]})"


def annihilator(m: GaloisModule) -> IdealLattice:
    """{x in Z[G] : x·M = 0} as a lattice in the group-ring coordinates."""
    g = m.group
    space = GroupRingSpace(g)
    n = m.ngens
    if n == 0:
        return IdealLattice.unit(space)
    # x = sum a_h h kills M iff sum a_h A_h[i][j] = 0 mod d_j for all i, j
    rows = [[m.group_matrix(h)[i][j] for i in range(n) for j in range(n)] for h in g.elements()]
    mods = []
    for i in range(n):
        for j in range(n):
            r = [0] * (n * n)
            r[i * n + j] = m.invariants[j]
            mods.append(r)
    ker = left_kernel(rows + mods, n * n)
    order = g.order
    vecs = [r[:order] for r in ker if any(r[:order])]
    return IdealLattice(space, hnf(vecs, order), 1)


# ---------------------------------------------------------------------------
# size checks


def regular_matrix(a: PresentationMatrix):
    """Integer matrix whose row span is the Z-span of the relations and their translates."""
    if not isinstance(a.ring, FiniteAbelianGroup):
        return [list(r) for r in a.rows]
    g = a.ring
    out = []
    for row in a.rows:
        for h in g.elements():
            vec = []
            for x in row:
                vec.extend(x.translate(h).coeffs)
            out.append(vec)
    return out


def module_order_and_size_checks(a: PresentationMatrix, conj=None) -> dict:
    """Compare #(B^n / A·B^n) with #(B / det A), and with the character product.

    With ``conj`` the ring is the minus quotient of Z[G] and the character
    product runs over odd characters only.
    """
    n = a.ngens
    if a.nrels != n:
        raise ValueError("a square presentation is required")
    if isinstance(a.ring, FiniteAbelianGroup):
        g = a.ring
        zero, one = a._zero_one()
        d = ring_det(a.rows, zero, one)
        if conj is None:
            big = regular_matrix(a)
            mult = [d.translate(h).coeffs for h in g.elements()]
            chars = enumerate_characters(g)
        else:
            space = MinusSpace(g, conj)
            big = []
            for row in a.rows:
                for h in space.reps:
                    vec = []
                    for x in row:
                        vec.extend(int(c) for c in space.vector(x.translate(h)))
                    big.append(vec)
            mult = [[int(c) for c in r] for r in space.multiplication_matrix(d)]
            chars = [chi for chi in enumerate_characters(g) if chi.is_odd(conj)]
        coker = abs(det(big))
        quot = abs(det(mult))
        if quot == 0:
            raise ValueError(f"determinant {d!r} is a zero divisor; the quotient is infinite")
        char_prod = reduce(lambda x, y: x * y, (chi.evaluate(d.change_ring(ZZ)) for chi in chars), Cyclotomic.rational(1))
        if not char_prod.is_rational():
            raise AssertionError("character product is not rational")
        char_size = abs(char_prod.rational_value())
        ok = coker == quot == char_size
        return {"coker_size": coker, "quotient_size": quot, "character_size": int(char_size), "ok": ok}
    d = det(a.rows)
    if d == 0:
        raise ValueError("determinant is zero; the quotient is infinite")
    coker = prod(diagonal(smith_normal_form(a.rows).d))
    return {"coker_size": abs(coker), "quotient_size": abs(d), "ok": abs(coker) == abs(d)}


# ---------------------------------------------------------------------------
# Fitting-equivalence


def _odd_primes(*orders):
    ps = set()
    for o in orders:
        ps.update(q for q in prime_factors(o) if q != 2)
    return sorted(ps)


def fitting_equivalence(m1: GaloisModule, m2: GaloisModule, conj=None, lambdas=range(-2, 3)) -> dict:
    """Compare invariants that any Z[G]-isomorphism would preserve.

    Checks the invariant factors, those of the kernels and cokernels of
    g - lambda for every group generator g and lambda in ``lambdas``, and,
    given ``conj``, the odd parts of the Fitting ideals of the minus parts.
    """
    if m1.group != m2.group:
        raise StructureError("modules over different groups")
    report = {"equivalent": True, "differences": []}

    def note(name, a, b):
        if a != b:
            report["equivalent"] = False
            report["differences"].append({"check": name, "left": a, "right": b})

    note("invariants", list(m1.invariants), list(m2.invariants))
    for k, gen in enumerate(m1.group.generators()):
        for lam in lambdas:
            mats = []
            for m in (m1, m2):
                a = [list(r) for r in m.group_matrix(gen)]
                for i in range(m.ngens):
                    a[i][i] -= lam
                mats.append(a)
            note(f"ker(g{k}-{lam})", list(m1.kernel(mats[0]).invariants), list(m2.kernel(mats[1]).invariants))
            note(f"coker(g{k}-{lam})", list(m1.cokernel(mats[0]).invariants), list(m2.cokernel(mats[1]).invariants))
    if conj is not None and report["equivalent"]:
        space = MinusSpace(m1.group, conj)
        f1 = m1.minus_part(conj).fitting_ideal().project_minus(space)
        f2 = m2.minus_part(conj).fitting_ideal().project_minus(space)
        for p in _odd_primes(m1.order, m2.order):
            if not f1.p_part_equals(f2, p):
                note(f"fitt_minus_{p}", f1.to_json(), f2.to_json())
    return report


__all__ = [
    "GaloisModule",
    "MAX_GENERATORS",
    "PresentationMatrix",
    "SmithForm",
    "all_minors",
    "annihilator",
    "compound_and_adjugate",
    "compound_matrix",
    "fitting_equivalence",
    "fitting_ideal",
    "higher_adjugate",
    "module_order_and_size_checks",
    "regular_matrix",
    "ring_det",
    "smith_normal_form",
]
