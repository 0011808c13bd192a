import random
from fractions import Fraction

import pytest
from bruteforce import Grp, character_values, gr_mul, row_hnf
from hypothesis import given
from hypothesis import strategies as st

from brumerstark.algebra_core import (
    Character,
    FiniteAbelianGroup,
    GaloisStructure,
    GroupRingElement,
    GroupRingSpace,
    IdealLattice,
    MinusSpace,
    StructureError,
    canonical_elements,
    enumerate_characters,
    groupring_arith,
    ideal_from_generators,
    ideal_ops,
    minus_projection,
    odd_characters,
    odd_product_det,
)
from brumerstark.cyclotomic import Cyclotomic

GROUPS = [(2,), (3,), (4,), (2, 2), (6,), (2, 4), (8,), (2, 6), (2, 2, 2), (4, 4)]
Z2 = FiniteAbelianGroup((2,))
Z3 = FiniteAbelianGroup((3,))
Z2Z2 = FiniteAbelianGroup((2, 2))

groups = st.sampled_from(GROUPS).map(FiniteAbelianGroup)


@st.composite
def elements(draw, group=None, bound=5):
    g = group or draw(groups)
    return GroupRingElement(g, draw(st.lists(st.integers(-bound, bound), min_size=g.order, max_size=g.order)))


@st.composite
def element_pairs(draw):
    g = draw(groups)
    return draw(elements(g)), draw(elements(g)), draw(elements(g))


def test_group_rejects_bad_invariants():
    with pytest.raises(ValueError):
        FiniteAbelianGroup((2, 3))
    with pytest.raises(ValueError):
        FiniteAbelianGroup((1,))


def test_character_counts():
    assert len(enumerate_characters(Z2)) == 2
    assert len(enumerate_characters(Z2Z2)) == 4
    assert len(odd_characters(Z2Z2, (1, 1))) == 2
    z4 = FiniteAbelianGroup((4,))
    assert sorted(chi.exponents[0] for chi in enumerate_characters(z4)) == [0, 1, 2, 3]


def test_character_rejects_wrong_exponent():
    with pytest.raises(ValueError):
        Character(FiniteAbelianGroup((2, 4)), (1, 0))


@pytest.mark.parametrize("orders", GROUPS)
def test_characters_are_homomorphisms(orders):
    g = FiniteAbelianGroup(orders)
    chars = enumerate_characters(g)
    assert len(chars) == g.order
    assert len({c.exponents for c in chars}) == g.order
    els = g.elements()
    for chi in chars:
        for a in els:
            for b in els:
                assert chi(g.add(a, b)) == chi(a) * chi(b)


@pytest.mark.parametrize("orders", GROUPS)
def test_character_values_match_complex_oracle(orders):
    g = FiniteAbelianGroup(orders)
    G = Grp(orders)
    rng = random.Random(1)
    x = [rng.randint(-3, 3) for _ in range(g.order)]
    exact = sorted(complex(_numeric(chi.evaluate(GroupRingElement(g, x)))).real for chi in enumerate_characters(g))
    approx = sorted(chi(x).real for chi in character_values(G))
    assert exact == pytest.approx(approx, abs=1e-9)


def _numeric(c: Cyclotomic):
    import cmath

    return sum(complex(v) * cmath.exp(2j * cmath.pi * i / c.n) for i, v in enumerate(c.canonical()))


@pytest.mark.parametrize("orders", GROUPS)
def test_orthogonality_reconstructs_element(orders):
    g = FiniteAbelianGroup(orders)
    rng = random.Random(sum(orders))
    x = GroupRingElement(g, [rng.randint(-4, 4) for _ in range(g.order)])
    chars = enumerate_characters(g)
    for h in g.elements():
        total = Cyclotomic.rational(0)
        for chi in chars:
            total = total + chi.evaluate(x) * chi.conjugate()(h)
        assert total == Cyclotomic.rational(g.order * x.coefficient(h))


def test_small_arithmetic_examples():
    one = GroupRingElement.scalar(Z2, 1)
    s = GroupRingElement.basis(Z2, (1,))
    assert ((one - s) * (one + s)).is_zero()
    x = GroupRingElement(Z2, [3, 5])
    assert x.sharp() == x
    a = GroupRingElement(Z3, [1, 1, 0])
    b = GroupRingElement(Z3, [1, 0, 1])
    assert (a * b).coeffs == (2, 1, 1)
    assert groupring_arith(a, None, "augmentation") == 2
    assert groupring_arith(a, b, "mul") == a * b


@given(element_pairs())
def test_ring_axioms(triple):
    x, y, z = triple
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).augmentation() == x.augmentation() * y.augmentation()


@given(element_pairs())
def test_multiplication_matches_convolution_oracle(triple):
    x, y, _ = triple
    G = Grp(x.group.invariant_factors)
    assert list((x * y).coeffs) == gr_mul(G, list(x.coeffs), list(y.coeffs))


@given(element_pairs())
def test_sharp_is_an_involutive_ring_map(triple):
    x, y, _ = triple
    assert x.sharp().sharp() == x
    assert (x * y).sharp() == x.sharp() * y.sharp()


def test_canonical_elements():
    gal = GaloisStructure(Z2, (1,))
    gal.add_place("v", [(1,)], (1,))
    gal.add_place("u", [], (1,))
    assert canonical_elements(gal, "v", "norm_of_inertia").coeffs == (1, 1)
    assert canonical_elements(gal, "v", "one_minus_frob_times_e").coeffs == (Fraction(1, 2), Fraction(-1, 2))
    assert canonical_elements(gal, "u", "one_minus_frob_times_e").coeffs == (1, -1)


def test_canonical_elements_properties():
    g = FiniteAbelianGroup((2, 4))
    gal = GaloisStructure(g, (0, 2))
    gal.add_place("v", [(1, 0)], (0, 1))
    gal.add_place("w", [(1, 0)], (1, 1))
    n = canonical_elements(gal, "v", "norm_of_inertia")
    assert n.augmentation() == 2
    e = canonical_elements(gal, "v", "unramified_idempotent_numerator")
    # changing the Frobenius by an inertia element leaves 1 - sigma e unchanged
    assert canonical_elements(gal, "v", "one_minus_frob_times_e") == canonical_elements(gal, "w", "one_minus_frob_times_e")
    e_v = n * Fraction(1, 2)
    assert e_v * e_v == e_v
    assert e is not None


def test_galois_structure_rejects_bad_conjugation():
    with pytest.raises(ValueError):
        GaloisStructure(FiniteAbelianGroup((4,)), (1,))


def test_minus_projection_examples():
    x = minus_projection(GroupRingElement(Z2, [5, 2]), (1,))
    assert x.coords == (3,)
    one_plus_c = GroupRingElement(Z2Z2, {(0, 0): 1, (1, 1): 1})
    assert minus_projection(one_plus_c, (1, 1)).is_zero()
    g1 = GroupRingElement.basis(Z2Z2, (1, 0))
    g2 = GroupRingElement.basis(Z2Z2, (0, 1))
    # g1 g2 = conj acts as -1
    assert minus_projection(g1 * g2, (1, 1)) == minus_projection(GroupRingElement.scalar(Z2Z2, -1), (1, 1))
    assert minus_projection(g1, (1, 1)) == minus_projection(-g2, (1, 1))


@given(element_pairs())
def test_minus_projection_is_a_ring_map(triple):
    x, y, _ = triple
    g = x.group
    conj = next((c for c in g.elements() if g.element_order(c) == 2), None)
    if conj is None:
        return
    px, py = minus_projection(x, conj), minus_projection(y, conj)
    assert px * py == minus_projection(x * y, conj)
    assert px + py == minus_projection(x + y, conj)


def test_ideal_examples():
    lat = ideal_from_generators([GroupRingElement(Z2, [2, 0]), GroupRingElement(Z2, [1, 1])])
    assert lat.rows == [[1, 1], [0, 2]]
    assert lat.contains(GroupRingElement(Z2, [1, -1]))
    assert lat.coordinates(GroupRingElement(Z2, [1, -1])) is not None
    assert not lat.contains(GroupRingElement(Z2, [1, 0]))
    unit = ideal_from_generators([GroupRingElement.scalar(Z2, 1)])
    assert unit.rows == [[1, 0], [0, 1]]
    zero = ideal_from_generators([GroupRingElement.zero(Z2)])
    assert zero.is_zero() and zero.rank == 0
    assert ideal_ops(lat, lat, "equals")
    assert ideal_ops(unit, lat, "product") == lat
    assert ideal_ops(lat, GroupRingElement(Z2, [1, -1]), "membership")


def test_ideal_lattices_in_different_rings_do_not_mix():
    a = IdealLattice.unit(GroupRingSpace(Z2))
    b = IdealLattice.unit(GroupRingSpace(Z3))
    with pytest.raises(StructureError):
        a * b


@given(st.data())
def test_ideal_is_stable_and_order_independent(data):
    g = data.draw(groups)
    gens = data.draw(st.lists(elements(g, 4), min_size=1, max_size=3))
    lat = ideal_from_generators(gens)
    assert lat.is_group_stable()
    shuffled = data.draw(st.permutations(gens))
    assert ideal_from_generators(list(shuffled)) == lat
    # independent HNF of the same generating set
    space = GroupRingSpace(g)
    vecs = [[int(c) for c in space.translate(h, space.vector(x))] for x in gens for h in g.elements()]
    assert lat.denominator == 1 and lat.rows == row_hnf(vecs, g.order)


@given(st.data())
def test_membership_closed_under_sums_and_translation(data):
    g = data.draw(groups)
    gens = data.draw(st.lists(elements(g, 4), min_size=1, max_size=2))
    lat = ideal_from_generators(gens)
    coeffs = data.draw(st.lists(elements(g, 3), min_size=len(gens), max_size=len(gens)))
    x = sum((c * y for c, y in zip(coeffs, gens)), GroupRingElement.zero(g))
    y = data.draw(elements(g, 3)) * gens[0]
    assert lat.contains(x) and lat.contains(y)
    assert lat.contains(x + y)
    for h in g.elements():
        assert lat.contains(x.translate(h))


def test_fractional_ideal_denominator():
    lat = ideal_from_generators([GroupRingElement(Z2, [Fraction(1, 6), Fraction(-1, 6)])])
    assert lat.denominator == 6
    assert lat.contains(GroupRingElement(Z2, [Fraction(1, 6), Fraction(-1, 6)]))
    assert not lat.contains(GroupRingElement(Z2, [Fraction(1, 12), Fraction(-1, 12)]))


def test_p_part_equality_and_local_membership():
    space = GroupRingSpace(Z2)
    a = ideal_from_generators([GroupRingElement(Z2, [3, 0])])
    b = ideal_from_generators([GroupRingElement(Z2, [6, 0])])
    assert a.p_part_equals(b, 3) and a.p_part_equals(b, 5)
    assert not a.p_part_equals(b, 2)
    assert a.contains_p_local(space.vector(GroupRingElement(Z2, [1, 0])), 2)
    assert not a.contains_p_local(space.vector(GroupRingElement(Z2, [1, 0])), 3)
    assert a.distinguishing_vector(b) is not None
    assert a.distinguishing_vector(a) is None


def test_minus_space_projection_of_lattices():
    space = MinusSpace(Z2, (1,))
    lat = ideal_from_generators([GroupRingElement(Z2, [2, 0]), GroupRingElement(Z2, [1, 1])]).project_minus(space)
    assert lat.rows == [[2]]


def test_odd_product_det_examples():
    assert odd_product_det(GroupRingElement(Z2, [7, 3]), (1,)) == 4
    assert odd_product_det(GroupRingElement.scalar(Z2Z2, 1), (1, 1)) == 1
    x = GroupRingElement(Z2Z2, {(0, 0): 2, (1, 0): 1})
    by_chars = 1
    for chi in odd_characters(Z2Z2, (1, 1)):
        by_chars *= chi.evaluate(x).rational_value()
    assert odd_product_det(x, (1, 1)) == by_chars


@given(st.data())
def test_odd_product_det_is_product_of_odd_characters(data):
    orders, conj = data.draw(st.sampled_from([((2,), (1,)), ((4,), (2,)), ((2, 2), (1, 1)), ((6,), (3,)), ((2, 4), (1, 2))]))
    g = FiniteAbelianGroup(orders)
    x = data.draw(elements(g, 4))
    prod_ = Cyclotomic.rational(1)
    for chi in odd_characters(g, conj):
        prod_ = prod_ * chi.evaluate(x)
    assert prod_.is_rational()
    assert odd_product_det(x, conj) == prod_.rational_value()


def test_serialization_uses_strings():
    x = GroupRingElement(Z2, [Fraction(1, 2), 3])
    js = x.to_json()
    assert js["coefficients"] == ["1/2", "3"]
    lat = ideal_from_generators([GroupRingElement(Z2, [2, 0])])
    assert all(isinstance(v, str) for r in lat.to_json()["hnf"] for v in r)


def test_mod_coefficients_and_teichmuller_values():
    g = FiniteAbelianGroup((4,))
    chi = enumerate_characters(g)[1]
    w = chi.evaluate_mod((1,), 5, 2)
    assert pow(w, 4, 25) == 1 and pow(w, 2, 25) != 1
