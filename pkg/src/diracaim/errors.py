"""Exception types raised across the package."""


class DiracAimError(Exception):
    """Base class for all package errors."""


class CenterMismatchError(DiracAimError, ValueError):
    """Two series with different expansion points were combined."""


class DegreeExhaustedError(DiracAimError):
    """A derivative was requested from a degree-0 series.

    Usually means the degree budget is too small for the AIM depth.
    """


class SingularExpansionError(DiracAimError, ZeroDivisionError):
    """Reciprocal of a series whose constant term vanishes (r0 on a pole)."""


class UnphysicalCoupling(DiracAimError, ValueError):
    """The origin exponent gamma would be imaginary (coupling >= |k|)."""


class NoDiscreteSpectrum(DiracAimError, ValueError):
    """Linear confinement without scalar dominance (B2 <= B1)."""


class NoSignChange(DiracAimError):
    """The quantization function has the same sign at both bracket ends."""


class NotConverged(DiracAimError):
    """Root estimates did not settle within the allowed depth or steps.

    Attributes
    ----------
    history : list of (depth, energy) pairs gathered before giving up.
    """

    def __init__(self, message, history=None, last_delta=None):
        super().__init__(message)
        self.history = list(history or [])
        self.last_delta = last_delta


class GeneratorSingular(DiracAimError):
    """lambda_n vanishes at the generator expansion point."""
