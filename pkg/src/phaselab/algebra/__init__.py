"""Exact computational algebra over Q: polynomials, Groebner bases, Hilbert
polynomials and incidence ideals of autocorrelation equations."""

from .groebner import GroebnerBudgetExceeded, Ideal, groebner, is_groebner, is_reduced, reduce
from .hilbert import HilbertPoly, hilbert_numerator, hilbert_polynomial
from .incidence import (
    check_signal_conjecture,
    check_support_conjecture,
    check_support_pair,
    incidence_ideal,
    signal_incidence_ideal,
    signal_sweep,
)
from .poly import RationalMPoly

__all__ = [
    "GroebnerBudgetExceeded",
    "HilbertPoly",
    "Ideal",
    "RationalMPoly",
    "check_signal_conjecture",
    "check_support_conjecture",
    "check_support_pair",
    "groebner",
    "hilbert_numerator",
    "hilbert_polynomial",
    "incidence_ideal",
    "is_groebner",
    "is_reduced",
    "reduce",
    "signal_incidence_ideal",
    "signal_sweep",
]
