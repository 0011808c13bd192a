"""Exact verification of Brumer-Stark, Kurihara and related statements for
imaginary quadratic and biquadratic CM fields, plus Eisenstein series tools."""

from .algebra_core import FiniteAbelianGroup, GroupRingElement, IdealLattice, MinusSpace
from .fitting import GaloisModule, fitting_ideal, smith_normal_form
from .quadratic import ImagQuadField, form_class_group, ray_class_group
from .stickelberger import AbelianFieldQ, compositum_field, quadratic_field, sinnott_kurihara_ideal, theta
from .verify import VerificationCase, VerificationReport, run_case

__version__ = "0.1.0"

__all__ = [
    "AbelianFieldQ",
    "FiniteAbelianGroup",
    "GaloisModule",
    "GroupRingElement",
    "IdealLattice",
    "ImagQuadField",
    "MinusSpace",
    "VerificationCase",
    "VerificationReport",
    "compositum_field",
    "fitting_ideal",
    "form_class_group",
    "quadratic_field",
    "ray_class_group",
    "run_case",
    "sinnott_kurihara_ideal",
    "smith_normal_form",
    "theta",
]
