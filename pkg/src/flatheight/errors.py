"""Exception hierarchy shared by the pipeline; the CLI maps these to exit codes."""
from __future__ import annotations


class AnalysisError(Exception):
    """Base class.  ``diagnostics`` is a JSON-serialisable dict for stderr."""

    exit_code = 1

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class PreconditionError(AnalysisError):
    """Input violates a precondition (e.g. nonzero value or gradient at the origin)."""

    exit_code = 2


class NotDegenerate(AnalysisError):
    """The Hessian determinant does not vanish identically."""

    exit_code = 3


class Unrepresentable(AnalysisError):
    """No structural decomposition was found (contradicts exact theory; never guessed)."""

    exit_code = 4


class CandidateIrrational(Unrepresentable):
    """A witness plane would need a field beyond the supported quadratic extension."""


class NonIntegerExponentRatio(AnalysisError):
    """A non-adapted compact edge whose weight ratio is not an integer."""

    exit_code = 4


class IrrationalRoot(AnalysisError):
    """A root needed for a coordinate change is not in the supported field."""

    exit_code = 4


class IterationCapExceeded(AnalysisError):
    """The 2D adaptation loop hit its iteration cap; ``partial`` holds the chart so far."""

    exit_code = 5

    def __init__(self, message: str, partial=None, **diagnostics):
        super().__init__(message, **diagnostics)
        self.partial = partial


class ToleranceNotMet(AnalysisError):
    """Numerical quadrature could not reach the requested tolerance within budget."""


class BudgetExceeded(AnalysisError):
    """Monte Carlo sublevel estimation ran out of budget."""


class InsufficientSamples(AnalysisError):
    """Too few accepted samples for a fit."""


class NoLinearWindow(AnalysisError):
    """No window of the log-log data passed the linearity test."""
