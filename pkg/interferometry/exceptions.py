"""
Exceptions raised by the interferometry app.

Input problems derive from ``InvalidConfigurationError`` (also a ``ValueError``),
numerical breakdowns from ``NumericalError`` (also a ``RuntimeError``). The
management commands map the first family to exit status 2 and the second to
exit status 3.
"""


class FringeLabError(Exception):
    """Base class for every error raised by the simulation code."""


class InvalidConfigurationError(FringeLabError, ValueError):
    """A configuration, grid or input state violates one of its invariants."""


class InvalidPhaseError(InvalidConfigurationError):
    """A phase lies on a sin(phi) = 0 singularity or outside [-pi, pi]."""


class OutsideSupportError(InvalidConfigurationError):
    """A semiclassical quantity was requested where classical J3 is imaginary."""


class NumericalError(FringeLabError, RuntimeError):
    """A numerical procedure failed to deliver a trustworthy result."""


class DiagonalizationError(NumericalError):
    """An eigendecomposition came back inaccurate or incomplete."""


class NonRealizableTraceError(NumericalError):
    """The amplitudes of a trace do not share one constant global phase."""


class GridTooCoarseError(NumericalError):
    """Sign changes of the realized amplitude are too dense for the grid."""


class StepSizeUnderflowError(NumericalError):
    """The ODE integrator could not make progress, usually near sin(phi) = 0."""
