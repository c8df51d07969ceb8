"""Numerical checks of the decay and integrability exponents."""
from .bump import BumpSpec
from .decay import (
    DecaySamples,
    DirectionResult,
    FitResult,
    cone_directions,
    decay_scan,
    directional_decay,
    fit_decay,
    fit_envelope,
    is_super_polynomial,
)
from .oscillatory import OscValue, eval_oscillatory
from .sublevel import (
    IntegrabilityVerdict,
    SublevelFit,
    SublevelSamples,
    fit_sublevel,
    integrability_probe,
    sublevel_measure,
)

__all__ = [
    "BumpSpec", "DecaySamples", "DirectionResult", "FitResult", "IntegrabilityVerdict", "OscValue",
    "SublevelFit", "SublevelSamples", "cone_directions", "decay_scan", "directional_decay",
    "eval_oscillatory", "fit_decay", "fit_envelope", "fit_sublevel", "integrability_probe",
    "is_super_polynomial", "sublevel_measure",
]
