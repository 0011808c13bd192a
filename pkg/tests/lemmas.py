"""Random instances of the Fitting-ideal lemmas, each checked against brute force.

Every ``check_*`` function takes a ``random.Random`` and returns ``None`` when
the drawn instance is rejected (infinite or too large to enumerate), otherwise
a dict with an ``ok`` flag and whatever data explains a failure.
"""

from __future__ import annotations

from bruteforce import (
    Grp,
    character_is_odd,
    character_values,
    cokernel_elements,
    cokernel_order,
    complex_product_to_int,
    compound,
    determinantal_invariants,
    gr_det,
    int_det,
    lattice_reduce,
    minus_relations,
    regular_relations,
    row_hnf,
)

from brumerstark.algebra_core import FiniteAbelianGroup, GroupRingElement
from brumerstark.fitting import (
    GaloisModule,
    PresentationMatrix,
    compound_and_adjugate,
    fitting_ideal,
    module_order_and_size_checks,
    smith_normal_form,
)

Z2 = FiniteAbelianGroup((2,))
MAX_ENUM = 5000

GROUPS_WITH_CONJ = [((2,), (1,)), ((4,), (2,)), ((2, 2), (1, 0)), ((2, 2), (1, 1)), ((6,), (3,)), ((2, 4), (0, 2))]


def _elem(rng, order, bound=2):
    return [rng.randint(-bound, bound) for _ in range(order)]


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


# size lemma: #B^n / A B^n = #B / det A ---------------------------------------


def check_size_lemma(rng):
    orders, _ = rng.choice(GROUPS_WITH_CONJ + [((3,), None), ((3,), None)])
    G = Grp(orders)
    n = 1 if G.order > 3 else rng.choice([1, 2])
    m = [[_elem(rng, G.order) for _ in range(n)] for _ in range(n)]
    lhs = cokernel_order(regular_relations(G, m), n * G.order)
    if lhs == 0:
        return None
    d = gr_det(G, m)
    rhs = cokernel_order(regular_relations(G, [[d]]), G.order)
    grp = FiniteAbelianGroup(orders)
    rows = [[GroupRingElement(grp, x) for x in row] for row in m]
    pkg = module_order_and_size_checks(PresentationMatrix(grp, rows))
    ok = lhs == rhs == pkg["coker_size"] == pkg["quotient_size"] and pkg["ok"]
    return {"ok": ok, "matrix": m, "lhs": lhs, "rhs": rhs, "package": pkg}


# character size lemma: #R_Psi/(x) = prod psi(x) ---------------------------------


def check_character_size_lemma(rng):
    orders, conj = rng.choice(GROUPS_WITH_CONJ)
    G = Grp(orders)
    x = _elem(rng, G.order, 3)
    full = rng.random() < 0.3
    if full:
        count = cokernel_order(regular_relations(G, [[x]]), G.order)
        chars = character_values(G)
    else:
        rels, dim = minus_relations(G, conj, x)
        count = cokernel_order(rels, dim)
        chars = [chi for chi in character_values(G) if character_is_odd(G, chi, conj)]
    if count == 0:
        return None
    char_prod = abs(complex_product_to_int([chi(x) for chi in chars]))
    pkg = module_order_and_size_checks(
        PresentationMatrix(FiniteAbelianGroup(orders), [[GroupRingElement(FiniteAbelianGroup(orders), x)]]),
        None if full else conj,
    )
    ok = count == char_prod == pkg["quotient_size"] == pkg["character_size"] and pkg["ok"]
    return {"ok": ok, "x": x, "conj": None if full else conj, "count": count, "characters": char_prod, "package": pkg}


# modules over Z[Z/2] given by block presentations --------------------------------


def _z2_relations(p):
    """Z-relations of Z[Z/2]^k / rows(p); entries of p are pairs (a, b) = a + b·sigma."""
    rels = []
    for row in p:
        plain, swapped = [], []
        for a, b in row:
            plain += [a, b]
            swapped += [b, a]
        rels += [plain, swapped]
    return rels


def _swap_action(k):
    n = 2 * k
    m = [[0] * n for _ in range(n)]
    for j in range(k):
        m[2 * j][2 * j + 1] = m[2 * j + 1][2 * j] = 1
    return m


def _z2_entry(rng, bound=3):
    return (rng.randint(-bound, bound), rng.randint(-bound, bound))


def _unit_z(k, j):
    return [int(i == 2 * j) for i in range(2 * k)]


def _nonzero_divisor_block(rng, k):
    while True:
        p = [[_z2_entry(rng) for _ in range(k)] for _ in range(k)]
        d = gr_det(Grp((2,)), [[list(e) for e in row] for row in p])
        if d[0] ** 2 != d[1] ** 2:
            return p, d


def _extension(rng, pa, pc):
    """Presentation [[P_A, 0], [X, P_C]]: generators of A first, then those of C.

    Killing the A-generators leaves exactly the relations P_C, and the orders
    multiply, so A is presented by P_A.
    """
    ka, kc = len(pa), len(pc)
    top = [list(pa[i]) + [(0, 0)] * kc for i in range(ka)]
    bottom = [[_z2_entry(rng, 2) for _ in range(ka)] + list(pc[i]) for i in range(kc)]
    return top + bottom


def _module(p):
    k = len(p)
    return GaloisModule.from_relations(Z2, 2 * k, _z2_relations(p), [_swap_action(k)])


def _principal_rows(d):
    return row_hnf([list(d), [d[1], d[0]]], 2)


def _lattice_rows(lat):
    return row_hnf([[int(x) for x in r] for r in lat.basis()], 2)


def check_fitting_multiplicativity(rng):
    """0 -> A -> B -> C -> 0 with C quadratically presented: Fitt(B) = Fitt(A) Fitt(C)."""
    ka, kc = rng.choice([(1, 1), (1, 1), (1, 2), (2, 1)])
    pa, da = _nonzero_divisor_block(rng, ka)
    pc, dc = _nonzero_divisor_block(rng, kc)
    pb = _extension(rng, pa, pc)
    k = ka + kc
    order = cokernel_order(_z2_relations(pb), 2 * k)
    if order > MAX_ENUM:
        return None
    B = _module(pb)
    a_vecs = [B.from_generator_coords(_unit_z(k, j)) for j in range(ka)]
    A = B.submodule(a_vecs)
    C = B.quotient(a_vecs)
    fa, fb, fc = A.fitting_ideal(), B.fitting_ideal(), C.fitting_ideal()
    sizes_ok = (
        B.order == order
        and A.order == cokernel_order(_z2_relations(pa), 2 * ka)
        and C.order == cokernel_order(_z2_relations(pc), 2 * kc)
    )
    principal = _lattice_rows(fb) == _principal_rows(gr_det(Grp((2,)), [[list(e) for e in row] for row in pb]))
    ok = sizes_ok and principal and fa * fc == fb
    return {"ok": ok, "presentation": pb, "sizes_ok": sizes_ok, "principal": principal}


def _direct_sum(p, q):
    kp, kq = len(p), len(q)
    rows = [list(r) + [(0, 0)] * kq for r in p] + [[(0, 0)] * kp + list(r) for r in q]
    return rows


def check_fiber_product_lemma(rng):
    """B ->> C <<- B' with B, B' quadratically presented: Fitt(A)Fitt(B') = Fitt(A')Fitt(B)."""
    pc, _ = _nonzero_divisor_block(rng, 1)
    pa, _ = _nonzero_divisor_block(rng, 1)
    pa2, _ = _nonzero_divisor_block(rng, 1)
    pb = _extension(rng, pa, pc)
    pb2 = _extension(rng, pa2, pc)
    ob = cokernel_order(_z2_relations(pb), 4)
    ob2 = cokernel_order(_z2_relations(pb2), 4)
    if ob * ob2 > 4 * MAX_ENUM:
        return None
    B, B2 = _module(pb), _module(pb2)
    A = B.submodule([B.from_generator_coords(_unit_z(2, 0))])
    A2 = B2.submodule([B2.from_generator_coords(_unit_z(2, 0))])
    lhs = A.fitting_ideal() * B2.fitting_ideal()
    rhs = A2.fitting_ideal() * B.fitting_ideal()
    # the fiber product M inside B + B', generated by (a, 0), (0, a') and (c, c')
    S = _module(_direct_sum(pb, pb2))
    gens = [[1, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 1, 0, 0, 0, 1, 0]]
    M = S.submodule([S.from_generator_coords(g) for g in gens])
    oc = cokernel_order(_z2_relations(pc), 2)
    fm = M.fitting_ideal()
    ok = lhs == rhs and fm == rhs and M.order * oc == ob * ob2
    return {"ok": ok, "B": pb, "B'": pb2}


# compound matrices: Fitt(M/N) kills coker(wedge^r N -> wedge^r M) ----------------


def check_compound_annihilation(rng):
    n = rng.choice([2, 3, 3, 4])
    r = rng.randint(1, n)
    a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
    d = int_det(a)
    if d == 0:
        return None
    c = compound(a, r)
    size = len(c)
    if abs(int_det(c)) > MAX_ENUM:
        return None
    c_pkg, adj = compound_and_adjugate(a, r)
    h, elements = cokernel_elements(c, size)
    killed = all(not any(lattice_reduce(h, [d * x for x in v])) for v in elements)
    fitt = fitting_ideal(PresentationMatrix("ZZ", a))
    ok = c_pkg == c and killed and fitt == abs(d) and len(elements) == abs(d) ** _binom(n - 1, r - 1)
    return {"ok": ok, "matrix": a, "r": r, "cokernel_size": len(elements)}


def _binom(n, k):
    from math import comb

    return comb(n, k)


# Smith normal form --------------------------------------------------------------


def check_smith_form(rng):
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    a = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
    sf = smith_normal_form(a)
    product_ok = _matmul(_matmul(sf.u, a), sf.v) == sf.d
    unimodular = abs(int_det(sf.u)) == 1 and abs(int_det(sf.v)) == 1
    diagonal_ok = all(sf.d[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    ok = product_ok and unimodular and diagonal_ok and sf.diagonal == determinantal_invariants(a)
    return {"ok": ok, "matrix": a, "diagonal": sf.diagonal}


LEMMAS = {
    "size of B^n/A.B^n": check_size_lemma,
    "size via characters": check_character_size_lemma,
    "Fitting multiplicativity": check_fitting_multiplicativity,
    "fiber product": check_fiber_product_lemma,
    "compound annihilation": check_compound_annihilation,
    "Smith form": check_smith_form,
}


def run_instances(check, count, seed):
    """Run ``check`` until ``count`` instances are accepted; return (accepted, failures)."""
    import random

    rng = random.Random(seed)
    accepted, failures, draws = 0, [], 0
    while accepted < count:
        draws += 1
        if draws > 50 * count:
            raise RuntimeError("too many rejected instances")
        res = check(rng)
        if res is None:
            continue
        accepted += 1
        if not res["ok"]:
            failures.append(res)
    return accepted, failures
