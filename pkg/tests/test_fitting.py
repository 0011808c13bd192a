import random

import pytest
from bruteforce import cokernel_elements, compound, determinantal_invariants, int_det, lattice_reduce
from hypothesis import given
from hypothesis import strategies as st
from lemmas import (
    check_character_size_lemma,
    check_compound_annihilation,
    check_fiber_product_lemma,
    check_fitting_multiplicativity,
    check_size_lemma,
    check_smith_form,
)

from brumerstark.algebra_core import FiniteAbelianGroup, GroupRingElement, GroupRingSpace, IdealLattice, ideal_from_generators
from brumerstark.fitting import (
    GaloisModule,
    PresentationMatrix,
    compound_and_adjugate,
    fitting_equivalence,
    fitting_ideal,
    module_order_and_size_checks,
    smith_normal_form,
)

Z2 = FiniteAbelianGroup((2,))
seeds = st.integers(0, 2**32 - 1)


def _run(check, seed):
    res = check(random.Random(seed))
    if res is not None:
        assert res["ok"], res


@given(seeds)
def test_size_lemma(seed):
    _run(check_size_lemma, seed)


@given(seeds)
def test_character_size_lemma(seed):
    _run(check_character_size_lemma, seed)


@given(seeds)
def test_fitting_ideal_is_multiplicative(seed):
    _run(check_fitting_multiplicativity, seed)


@given(seeds)
def test_fiber_product_identity(seed):
    _run(check_fiber_product_lemma, seed)


@given(seeds)
def test_fitting_ideal_kills_compound_cokernel(seed):
    _run(check_compound_annihilation, seed)


@given(seeds)
def test_smith_form_random(seed):
    _run(check_smith_form, seed)


def test_smith_examples():
    assert smith_normal_form([[1, 0], [0, 1]]).diagonal == [1, 1]
    assert smith_normal_form([[6, 0], [0, 4]]).diagonal == [2, 12]
    with pytest.raises(ValueError):
        smith_normal_form([])


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4), st.randoms())
def test_smith_form_permutation_invariance(a, rnd):
    rows = list(a)
    rnd.shuffle(rows)
    cols = list(range(4))
    rnd.shuffle(cols)
    permuted = [[r[c] for c in cols] for r in rows]
    sf = smith_normal_form(a)
    assert smith_normal_form(permuted).diagonal == sf.diagonal
    js = sf.to_json()
    assert set(js) == {"D", "U", "V"}


def test_fitting_examples():
    assert fitting_ideal(PresentationMatrix("ZZ", [[6]])) == 6
    rows = [[GroupRingElement(Z2, [1, 1])], [GroupRingElement(Z2, [3, 0])]]
    fitt = fitting_ideal(PresentationMatrix(Z2, rows))
    assert fitt == ideal_from_generators([GroupRingElement(Z2, [1, 1]), GroupRingElement(Z2, [3, 0])])
    # more generators than relations: the zeroth ideal vanishes
    assert fitting_ideal(PresentationMatrix("ZZ", [[1, 2]])) == 0
    assert fitting_ideal(PresentationMatrix("ZZ", [[1, 2]]), 1) == 1
    with pytest.raises(ValueError):
        fitting_ideal(PresentationMatrix("ZZ", [[1]]), -1)


@pytest.mark.parametrize("seed", range(50))
def test_fitting_over_z_is_gcd_of_minors_and_annihilates(seed):
    rng = random.Random(seed)
    a = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(4)]
    f = fitting_ideal(PresentationMatrix("ZZ", a))
    from math import gcd

    g = 0
    for rows in __import__("itertools").combinations(range(4), 3):
        g = gcd(g, int_det([a[i] for i in rows]))
    assert f == g
    if g and g <= 3000:
        h, els = cokernel_elements(a, 3)
        assert all(not any(lattice_reduce(h, [g * x for x in v])) for v in els)


def test_higher_fitting_ideals_over_z():
    a = [[2, 0, 0], [0, 6, 0], [0, 0, 12]]
    assert [fitting_ideal(PresentationMatrix("ZZ", a), i) for i in range(4)] == [144, 12, 2, 1]


def test_compound_examples():
    a = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    c, adj = compound_and_adjugate(a, 3)
    assert c == [[int_det(a)]]
    c1, adj1 = compound_and_adjugate(a, 1)
    assert c1 == a
    with pytest.raises(ValueError):
        compound_and_adjugate(a, 0)


@pytest.mark.parametrize("seed", range(20))
def test_second_compound_identity(seed):
    rng = random.Random(seed)
    a = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
    c, adj = compound_and_adjugate(a, 2)
    assert c == compound(a, 2)
    d = int_det(a)
    for i in range(6):
        for j in range(6):
            assert sum(adj[i][t] * c[t][j] for t in range(6)) == (d if i == j else 0)


def test_annihilator_examples():
    space = GroupRingSpace(Z2)
    triv = GaloisModule(Z2, [3], [[[1]]])
    neg = GaloisModule(Z2, [3], [[[-1]]])
    assert triv.annihilator() == ideal_from_generators([GroupRingElement(Z2, [3, 0]), GroupRingElement(Z2, [1, -1])])
    assert neg.annihilator() == ideal_from_generators([GroupRingElement(Z2, [3, 0]), GroupRingElement(Z2, [1, 1])])
    zero = GaloisModule(Z2, [], [[]])
    assert zero.annihilator() == IdealLattice.unit(space)


def test_size_check_examples():
    assert module_order_and_size_checks(PresentationMatrix("ZZ", [[6]]))["ok"]
    res = module_order_and_size_checks(PresentationMatrix(Z2, [[GroupRingElement(Z2, [3, 1])]]))
    assert res == {"coker_size": 8, "quotient_size": 8, "character_size": 8, "ok": True}
    with pytest.raises(ValueError):
        module_order_and_size_checks(PresentationMatrix(Z2, [[GroupRingElement(Z2, [1, 1])]]))


def _random_module(rng):
    """A random finite Z[Z/2]-module from a 2x2 presentation."""
    from lemmas import _module, _nonzero_divisor_block

    p, _ = _nonzero_divisor_block(rng, rng.choice([1, 2]))
    return _module(p)


@given(seeds)
def test_fitting_ideal_inside_annihilator(seed):
    m = _random_module(random.Random(seed))
    if m.order > 3000:
        return
    assert m.annihilator().contains_lattice(m.fitting_ideal())


@given(seeds)
def test_annihilator_kills_every_element(seed):
    m = _random_module(random.Random(seed))
    if m.order > 500:
        return
    for v in m.annihilator().basis():
        x = GroupRingElement(Z2, v)
        assert all(not any(m.apply(x, e)) for e in m.elements())


@given(seeds)
def test_dual_preserves_order_and_twists_annihilator(seed):
    m = _random_module(random.Random(seed))
    if m.order > 3000:
        return
    d = m.dual()
    assert d.invariants == m.invariants
    assert d.annihilator() == m.annihilator().sharp()


def test_module_validation():
    with pytest.raises(ValueError):
        GaloisModule(Z2, [1], [[[1]]])
    with pytest.raises(ValueError):
        GaloisModule(Z2, [4, 15], [[[1, 0], [0, 1]]])
    with pytest.raises(ValueError):
        # sigma must have order dividing 2
        GaloisModule(Z2, [5], [[[2]]])
    with pytest.raises(ValueError):
        GaloisModule.from_relations(Z2, 2, [[1, 0]], [[[0, 1], [1, 0]]])


def test_parts_of_a_module():
    # Z/60 = Z/4 + Z/15 with sigma = 1 on Z/4 and -1 on Z/15: sigma = 29 mod 60
    m = GaloisModule(Z2, [60], [[[29]]])
    assert m.odd_part().order == 15
    assert m.p_part(2).order == 4
    assert m.minus_part((1,)).odd_part().order == 15
    assert m.plus_part((1,)).odd_part().order == 1


def test_fitting_equivalence_detects_action_difference():
    triv = GaloisModule(Z2, [3], [[[1]]])
    neg = GaloisModule(Z2, [3], [[[-1]]])
    assert fitting_equivalence(triv, triv, (1,))["equivalent"]
    res = fitting_equivalence(triv, neg, (1,))
    assert not res["equivalent"] and res["differences"]


def test_determinantal_oracle_agrees_on_degenerate_shapes():
    for a in ([[0, 0], [0, 0]], [[2, 4, 6]], [[3], [6]]):
        assert smith_normal_form(a).diagonal == determinantal_invariants(a)
