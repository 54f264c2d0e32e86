"""Phase retrieval toolkit: measurement models, symmetry groups, root-flip
ambiguities, difference-set combinatorics and exact incidence-ideal checks."""

from .core import DEFAULT_TOL, PhaseLabError, SupportSet, Tolerances, as_signal
from .measure import (
    SensingMatrix,
    StftConfig,
    aperiodic_autocorr,
    blind_stft,
    fourier_intensity,
    frog,
    gabor_frame,
    gabor_measurements,
    periodic_autocorr,
    phaseless_linear,
    stft_phaseless,
)
from .symmetry import BlindStftElement, blind_apply, orbit_equivalent, stabilizer_order

__version__ = "0.1.0"

__all__ = [
    "BlindStftElement",
    "DEFAULT_TOL",
    "PhaseLabError",
    "SensingMatrix",
    "StftConfig",
    "SupportSet",
    "Tolerances",
    "aperiodic_autocorr",
    "as_signal",
    "blind_apply",
    "blind_stft",
    "fourier_intensity",
    "frog",
    "gabor_frame",
    "gabor_measurements",
    "orbit_equivalent",
    "periodic_autocorr",
    "phaseless_linear",
    "stabilizer_order",
    "stft_phaseless",
]
