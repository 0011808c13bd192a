"""Golden values for the worked examples, grouped by module.

Each entry is a zero-argument function returning exact data; ``build`` encodes
it with string numbers so files can be diffed byte for byte.
"""

from __future__ import annotations

from .algebra_core import (
    FiniteAbelianGroup,
    GaloisStructure,
    GroupRingElement,
    MinusSpace,
    canonical_elements,
    enumerate_characters,
    ideal_from_generators,
    minus_projection,
    odd_characters,
    odd_product_det,
)
from .eisenstein import (
    DirichletCharacter,
    L_at_nonpositive,
    eisenstein_qexp,
    hecke_T,
    primitive_characters,
    v_form_power,
    w_modified,
)
from .fitting import GaloisModule, PresentationMatrix, module_order_and_size_checks, smith_normal_form
from .quadratic import (
    ImagQuadField,
    form_class_group,
    prime_splitting,
    principal_generator,
    ray_class_group,
    s_unit_basis,
    s_units,
)
from .serialize import encode
from .stickelberger import (
    check_drcond,
    compositum_field,
    partial_zeta_zero,
    quadratic_field,
    sinnott_kurihara_ideal,
    theta,
)
from .verify import VerificationCase, run_case

Z2 = FiniteAbelianGroup((2,))
Z3 = FiniteAbelianGroup((3,))
Z2Z2 = FiniteAbelianGroup((2, 2))


def _z2(a, b):
    return GroupRingElement(Z2, [a, b])


# algebra_core -----------------------------------------------------------


def _characters():
    chars = enumerate_characters(Z2Z2)
    return {"count": len(chars), "odd": len(odd_characters(Z2Z2, (1, 1)))}


def _convolution():
    one_g = GroupRingElement(Z3, [1, 1, 0])
    one_g2 = GroupRingElement(Z3, [1, 0, 1])
    return (one_g * one_g2).coeffs


def _one_minus_frob():
    gal = GaloisStructure(Z2, (1,))
    gal.add_place("v", [(1,)], (1,))
    return canonical_elements(gal, "v", "one_minus_frob_times_e").coeffs


def _minus_relation():
    g1 = GroupRingElement.basis(Z2Z2, (1, 0))
    g2 = GroupRingElement.basis(Z2Z2, (0, 1))
    x = minus_projection(g1, (1, 1))
    y = minus_projection(g1 * g2, (1, 1))
    return {"g1": x.coords, "g1g2": y.coords}


def _hnf_basis():
    lat = ideal_from_generators([_z2(2, 0), _z2(1, 1)])
    return {"rows": lat.rows, "denominator": lat.denominator}


def _membership():
    lat = ideal_from_generators([_z2(2, 0), _z2(1, 1)])
    return {"member": lat.contains(_z2(1, -1)), "coordinates": lat.coordinates(_z2(1, -1))}


# fitting ----------------------------------------------------------------


def _snf_diag():
    return smith_normal_form([[6, 0], [0, 4]]).diagonal


def _annihilators():
    triv = GaloisModule(Z2, [3], [[[1]]])
    neg = GaloisModule(Z2, [3], [[[-1]]])
    return {"trivial": triv.annihilator().to_json(), "minus_one": neg.annihilator().to_json()}


def _quotient_size():
    return module_order_and_size_checks(PresentationMatrix(Z2, [[_z2(3, 1)]]))


# stickelberger ----------------------------------------------------------


def _partial_zeta():
    return {"3,1": partial_zeta_zero(3, 1), "4,3": partial_zeta_zero(4, 3)}


def _theta(d, S, T):
    return lambda: theta(quadratic_field(d), S, T).element.coeffs


def _drcond():
    return check_drcond(quadratic_field(-3), [7]).to_json()


def _ks_q3():
    K = quadratic_field(-3)
    ks = sinnott_kurihara_ideal(K, [7], "integral")
    space = MinusSpace(K.group, K.conj)
    principal = ideal_from_generators([theta(K, (), [7]).element.sharp()]).project_minus(space)
    return {"ks": ks.to_json(), "minus": ks.project_minus(space).to_json(), "equals_theta_sharp": ks.project_minus(space) == principal}


def _ks_biquadratic():
    H = compositum_field([-3, 5])
    return sinnott_kurihara_ideal(H, [11], "p_modified", 7).to_json()


def _odd_det():
    x = GroupRingElement(Z2Z2, {(0, 0): 2, (1, 0): 1})
    return odd_product_det(x, (1, 1))


# quadratic --------------------------------------------------------------


def _prime_generator(D, p, power):
    def f():
        K = ImagQuadField(D)
        P = prime_splitting(K, p).primes[0]
        return principal_generator(P.ideal**power).to_json()

    return f


# verify -----------------------------------------------------------------


def _report(case):
    return lambda: run_case(case).to_json(timings=False)


# eisenstein -------------------------------------------------------------


def _l_values():
    chi4 = DirichletCharacter.kronecker(-4)
    chi3 = primitive_characters(3, 1)[0]
    return {
        "zeta(-1)": L_at_nonpositive(DirichletCharacter.trivial(), 2),
        "L(chi_-4,0)": L_at_nonpositive(chi4, 1),
        "L(chi_-3,0)": L_at_nonpositive(chi3, 1),
    }


def _e4():
    f = eisenstein_qexp(4)
    g = hecke_T(f, 2)
    return {"prefix": f.to_json(10), "T2_equals_9E4": all(g[m] == 9 * f[m] for m in range(51))}


def _e1_chi4():
    return eisenstein_qexp(1, DirichletCharacter.kronecker(-4)).to_json(10)


def _w_chi4():
    return w_modified(1, DirichletCharacter.kronecker(-4), 1, [3]).to_json(10)


def _v_forms():
    out = {}
    for p, a, n in ((5, 0, 200), (5, 1, 100)):
        f = v_form_power(p, a, n)
        out[f"E{p - 1}^{p**a} mod {p**(a + 1)}"] = {
            "constant": f.constant,
            "nonzero_indices": [m for m in range(1, n + 1) if f[m] != f.ring.zero()],
        }
    return out


REGISTRY = {
    "algebra_core": {
        "characters_z2xz2": _characters,
        "convolution_z3": _convolution,
        "one_minus_frob_e_z2": _one_minus_frob,
        "minus_relation_z2xz2": _minus_relation,
        "hnf_2_1plussigma": _hnf_basis,
        "membership_1minussigma": _membership,
    },
    "fitting": {
        "snf_diag_6_4": _snf_diag,
        "annihilators_z3": _annihilators,
        "quotient_size_3_plus_sigma": _quotient_size,
    },
    "stickelberger": {
        "partial_zeta_zero": _partial_zeta,
        "theta_q3_S3": _theta(-3, [3], []),
        "theta_q3_S3_T7": _theta(-3, [3], [7]),
        "theta_qi_S2": _theta(-4, [2], []),
        "theta_qi_S2_T3": _theta(-4, [2], [3]),
        "drcond_q3_T7": _drcond,
        "ks_q3_T7": _ks_q3,
        "ks_p_biquadratic_-3_5_p7_T11": _ks_biquadratic,
        "odd_product_det_2_plus_g1": _odd_det,
    },
    "quadratic": {
        "form_class_group_-23": lambda: form_class_group(-23).to_json(),
        "form_class_group_-47": lambda: form_class_group(-47).to_json(),
        "splitting_-3_7": lambda: prime_splitting(ImagQuadField(-3), 7).to_json(),
        "splitting_-23_2": lambda: prime_splitting(ImagQuadField(-23), 2).to_json(),
        "ray_class_group_-4_T3": lambda: ray_class_group(ImagQuadField(-4), [3]).to_json(),
        "ray_class_group_-23_T3": lambda: ray_class_group(ImagQuadField(-23), [3]).to_json(),
        "generator_-7_prime_2": _prime_generator(-7, 2, 1),
        "generator_-23_prime_2_cubed": _prime_generator(-23, 2, 3),
        "s_units_-4_S5": lambda: s_units(ImagQuadField(-4), [5]).to_json(),
        "s_units_-23_S2": lambda: s_units(ImagQuadField(-23), [2]).to_json(),
        "s_unit_basis_-23_S2": lambda: s_unit_basis(ImagQuadField(-23), [2]).to_json(),
    },
    "verify": {
        "brumer_stark_-3_S3_T7": _report(VerificationCase("brumer-stark", -3, S=(3,), T=(7,))),
        "brumer_stark_-4_T7": _report(VerificationCase("brumer-stark", -4, T=(7,))),
        "cnf_-4_T3": _report(VerificationCase("cnf", -4, T=(3,))),
        "cnf_-23_T3": _report(VerificationCase("cnf", -23, T=(3,))),
        "kurihara_-23_T3_p3": _report(VerificationCase("kurihara", -23, T=(3,), p=3)),
        "kurihara_-3_-20_T11_p7": _report(VerificationCase("kurihara", -3, D2=-20, T=(11,), p=7)),
        "bs_unit_-23_p2_T3": _report(VerificationCase("bs-unit", -23, T=(3,), p=2)),
        "bs_unit_-4_p5_T3": _report(VerificationCase("bs-unit", -4, T=(3,), p=5)),
        "selmer_-4_T3": _report(VerificationCase("selmer", -4, T=(3,))),
        "selmer_-23_T3": _report(VerificationCase("selmer", -23, T=(3,))),
    },
    "eisenstein": {
        "L_values": _l_values,
        "E4": _e4,
        "E1_chi_-4": _e1_chi4,
        "W1_chi_-4_T3": _w_chi4,
        "v_forms_p5": _v_forms,
    },
}


def modules() -> list[str]:
    return sorted(REGISTRY)


def build(module: str) -> dict:
    """All golden values of one module, encoded."""
    return {key: encode(fn()) for key, fn in sorted(REGISTRY[module].items())}


__all__ = ["REGISTRY", "build", "modules"]
