import random
from math import gcd

import pytest
from bruteforce import is_fundamental, kronecker, reduced_forms_count
from hypothesis import given
from hypothesis import strategies as st
from sympy import primerange

from brumerstark.cli import negative_fundamental_discriminants
from brumerstark.eisenstein import DirichletCharacter, L_at_nonpositive
from brumerstark.quadratic import (
    ImagQuadField,
    QuadForm,
    elements_of_norm,
    form_class_group,
    prime_splitting,
    principal_generator,
    ray_class_group,
    s_unit_basis,
    s_units,
    valuation_at,
)

DISCS = negative_fundamental_discriminants(500)
SMALL_DISCS = [D for D in DISCS if D >= -200]
discs = st.sampled_from(SMALL_DISCS)


def test_discriminant_list_is_complete():
    assert DISCS == [D for D in range(-3, -501, -1) if is_fundamental(D)]


def test_class_group_examples():
    assert form_class_group(-4).order == 1
    g23 = form_class_group(-23)
    assert g23.order == 3 and g23.invariants == (3,)
    assert {(f.a, f.b, f.c) for f in g23.forms} == {(1, 1, 6), (2, 1, 3), (2, -1, 3)}
    g47 = form_class_group(-47)
    assert g47.order == 5 and g47.invariants == (5,)
    with pytest.raises(ValueError):
        form_class_group(-12)


@pytest.mark.parametrize("D", DISCS)
def test_class_number_matches_counts_and_l_value(D):
    K = ImagQuadField(D)
    h = form_class_group(D).order
    assert h == reduced_forms_count(D)
    assert h == L_at_nonpositive(DirichletCharacter.kronecker(D), 1) * K.w / 2


@given(discs, st.data())
def test_group_axioms_by_composition(D, data):
    cg = form_class_group(D)
    f, g, h = (data.draw(st.sampled_from(cg.forms)) for _ in range(3))
    e = cg.identity()
    assert f.compose(e).reduce() == f.reduce()
    assert f.compose(f.inverse()).reduce() == e.reduce()
    assert f.compose(g).compose(h).reduce() == f.compose(g.compose(h)).reduce()
    assert f.inverse().reduce() == QuadForm(f.a, -f.b, f.c).reduce()


@given(discs, st.integers(1, 40), st.integers(1, 40), st.randoms())
def test_ideal_products_match_form_composition(D, n, m, rnd):
    K = ImagQuadField(D)
    ideals_n = K.integral_ideals_of_norm(n)
    ideals_m = K.integral_ideals_of_norm(m)
    if not ideals_n or not ideals_m:
        return
    I, J = rnd.choice(ideals_n), rnd.choice(ideals_m)
    cg = K.class_group
    lhs = K.class_vector(I * J)
    rhs = cg.vector(I.form().compose(J.form()))
    assert lhs == rhs
    assert (I * J).norm() == n * m


@pytest.mark.parametrize("D", SMALL_DISCS[::3])
def test_prime_splitting_matches_kronecker(D):
    K = ImagQuadField(D)
    for p in primerange(2, 60):
        sp = prime_splitting(K, p)
        k = kronecker(D, p)
        assert sp.kind == {1: "split", -1: "inert", 0: "ramified"}[k]
        assert len(sp.primes) == (2 if k == 1 else 1)
        for q in sp.primes:
            assert q.ideal.norm() == q.residue_size
        if k == 1:
            a, b = sp.primes
            assert a.ideal.conjugate() == b.ideal and a.ideal != b.ideal


def test_splitting_examples():
    assert prime_splitting(ImagQuadField(-3), 7).kind == "split"
    assert prime_splitting(ImagQuadField(-4), 2).kind == "ramified"
    assert prime_splitting(ImagQuadField(-23), 2).kind == "split"


def _unit_residue_count(D, n):
    # (O/n)^* counted directly on x + y omega with omega^2 = D omega - (D^2 - D)/4
    c = (D * D - D) // 4
    return sum(1 for x in range(n) for y in range(n) if gcd(x * x + D * x * y + c * y * y, n) == 1)


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -20, -23, -24, -31, -39, -47, -56, -84])
@pytest.mark.parametrize("T", [(3,), (5,), (7,), (3, 5), (11,)])
def test_ray_class_group_order(D, T):
    K = ImagQuadField(D)
    if any(D % ell == 0 for ell in T):
        with pytest.raises(ValueError):
            ray_class_group(K, T)
        return
    n = 1
    for ell in T:
        n *= ell
    expected = form_class_group(D).order * _unit_residue_count(D, n) // K.w
    assert ray_class_group(K, T).order == expected


def test_ray_class_examples():
    assert ray_class_group(ImagQuadField(-4), [3]).module.invariants == (2,)
    assert ray_class_group(ImagQuadField(-4), []).order == 1
    r = ray_class_group(ImagQuadField(-23), [3])
    assert r.order % 3 == 0


@pytest.mark.parametrize("D,T", [(-23, (3,)), (-47, (3,)), (-39, (7,)), (-56, (3,)), (-84, (11,))])
def test_conjugation_on_ray_classes(D, T):
    K = ImagQuadField(D)
    R = ray_class_group(K, T)
    t = 1
    for ell in T:
        t *= ell
    rng = random.Random(D)
    for _ in range(10):
        n = rng.randint(1, 60)
        ideals = [I for I in K.integral_ideals_of_norm(n) if I.is_coprime_to(t)]
        if not ideals:
            continue
        I = rng.choice(ideals)
        assert R.class_of_ideal(I.conjugate()) == R.module.act((1,), R.class_of_ideal(I))
        # principal ideals with a generator = 1 mod t are trivial
    for x in elements_of_norm(K.unit_ideal(), 1):
        assert not any(R.class_of_element(x))


@given(discs, st.integers(1, 80))
def test_principal_generator_regenerates_ideal(D, n):
    K = ImagQuadField(D)
    for I in K.integral_ideals_of_norm(n):
        res = principal_generator(I)
        if res.principal:
            assert K.principal_ideal(res.generator) == I
        else:
            assert any(res.class_vector)


def test_principal_generator_examples():
    K7 = ImagQuadField(-7)
    assert principal_generator(K7.unit_ideal()).generator == 1 or principal_generator(K7.unit_ideal()).generator.norm() == 1
    P = prime_splitting(K7, 2).primes[0].ideal
    g = principal_generator(P).generator
    assert g.norm() == 2 and K7.principal_ideal(g) == P
    K23 = ImagQuadField(-23)
    P = prime_splitting(K23, 2).primes[0].ideal
    assert not principal_generator(P).principal
    g3 = principal_generator(P**3)
    assert g3.principal and g3.generator.norm() == 8


def test_s_unit_examples():
    data = s_units(ImagQuadField(-4), [5])
    assert [g.norm() for g in data.generators] == [5, 5]
    assert data.valuations == [[1, 0], [0, 1]]
    assert s_units(ImagQuadField(-4), []).generators == []
    d23 = s_units(ImagQuadField(-23), [2])
    assert d23.valuations == [[3, 0], [0, 3]]


@pytest.mark.parametrize("D,S", [(-23, [2]), (-47, [2, 3]), (-4, [5, 13]), (-31, [2, 5]), (-39, [2])])
def test_s_unit_basis_valuations(D, S):
    K = ImagQuadField(D)
    data = s_unit_basis(K, S)
    for g, row in zip(data.generators, data.valuations):
        assert [valuation_at(q, g) for q in data.primes] == row
        norm = 1
        for q, v in zip(data.primes, row):
            norm *= q.residue_size ** v if v >= 0 else 1
        assert g.norm() * _den(data.primes, row) == norm
    # the valuation lattice has index h_S-part: its determinant divides a power of h
    from bruteforce import int_det

    if data.valuations:
        d = abs(int_det(data.valuations))
        h = form_class_group(D).order
        assert d and all(p_ in _prime_set(h) for p_ in _prime_set(d))


def _den(primes, row):
    out = 1
    for q, v in zip(primes, row):
        if v < 0:
            out *= q.residue_size ** (-v)
    return out


def _prime_set(n):
    from sympy import primefactors

    return set(primefactors(n))


def test_valuation_of_zero_is_an_error():
    K = ImagQuadField(-23)
    q = prime_splitting(K, 2).primes[0]
    with pytest.raises(ValueError):
        valuation_at(q, K.element(0))


def test_roots_of_unity():
    for D, w in ((-3, 6), (-4, 4), (-7, 2)):
        K = ImagQuadField(D)
        assert len(K.roots_of_unity) == w
        assert all(z.norm() == 1 for z in K.roots_of_unity)
