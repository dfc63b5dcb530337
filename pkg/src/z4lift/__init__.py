"""Z/4 lifts of Artin-Schreier-Witt covers in characteristic 2.

Modules: ``gf2x`` (finite fields, rational functions, Witt vectors of
length two), ``dyadic`` (the coefficient ring of the lift), ``swan``
(degeneration types and good reduction), ``lift`` (the construction and its
certificate), ``oracle`` (independent cross-checks) and ``cli``.
"""

from .dyadic import DyadicNumber, DyadicPolynomial, DyadicRationalFunction, make_ring
from .errors import (
    InsufficientPrecision,
    MathInputError,
    VerificationError,
    Z4LiftError,
)
from .gf2x import GF, RationalFunction
from .lift import LiftProblem, problem_grid, verify_z4_lift
from .swan import Positive, Zero, check_good_reduction, degeneration_order2
from .witt import WittVector2, ramification_breaks, reduce_witt

__version__ = "0.1.0"

__all__ = [
    "GF",
    "RationalFunction",
    "WittVector2",
    "reduce_witt",
    "ramification_breaks",
    "make_ring",
    "DyadicNumber",
    "DyadicPolynomial",
    "DyadicRationalFunction",
    "Positive",
    "Zero",
    "degeneration_order2",
    "check_good_reduction",
    "LiftProblem",
    "problem_grid",
    "verify_z4_lift",
    "Z4LiftError",
    "MathInputError",
    "InsufficientPrecision",
    "VerificationError",
]
