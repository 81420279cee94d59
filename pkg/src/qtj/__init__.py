"""Finite-stage invariants of quantum tori.

Exact and arbitrary-precision computation of Diophantine approximation
pairs, partial Eisenstein sums, the correction-free Weierstrass function
and the classical and quantum modular invariant.
"""

__version__ = "0.1.0"

from .dioph import CFExpansion, DAPair, cf_expand, convergents
from .eisenstein import EisTriple, PartialSum, classical_G, g_triple, partial_G
from .errors import InputError, NumericError, QTJError
from .foliation import GL2Z, INFINITY, FoliationPoint, Modulus, act, reduce_modulus
from .modular import JReport, j_classical, j_from_c, j_from_g, j_quantum, normal_form
from .numerics import BigComplex, GaussianRational, QuadComplex, QuadIrr, Rational
from .schemes import Box, ClassicalCone, Explicit, QuantumTheta, QuantumWindow, Transformed, Translated
from .weierstrass import POLE, weier_residual, wp_nc, wp_nc_prime

__all__ = [
    "BigComplex", "Box", "CFExpansion", "ClassicalCone", "DAPair", "EisTriple", "Explicit",
    "FoliationPoint", "GL2Z", "GaussianRational", "INFINITY", "InputError", "JReport", "Modulus",
    "NumericError", "POLE", "PartialSum", "QTJError", "QuadComplex", "QuadIrr", "QuantumTheta",
    "QuantumWindow", "Rational", "Transformed", "Translated", "act", "cf_expand", "classical_G",
    "convergents", "g_triple", "j_classical", "j_from_c", "j_from_g", "j_quantum", "normal_form",
    "partial_G", "reduce_modulus", "weier_residual", "wp_nc", "wp_nc_prime",
]
