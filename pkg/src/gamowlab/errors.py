"""Exception hierarchy shared by the library and the command line."""


class GamowLabError(Exception):
    """Base class for every error raised by gamowlab."""


class ValidationError(GamowLabError, ValueError):
    """Bad parameters or configuration."""


# numerical failures


class NumericalError(GamowLabError, ArithmeticError):
    """A computation could not produce a trustworthy number."""


class NonConvergence(NumericalError):
    """Adaptive refinement or an iteration ran out of budget."""


class NonFinite(NumericalError):
    """An integrand or function returned NaN or infinity."""


class OscillationLimit(NonConvergence):
    """Oscillatory quadrature refused because the phase range is too large.

    ``t_max`` is the largest time for which the integral is still attempted.
    """

    def __init__(self, message, t_max):
        super().__init__(message)
        self.t_max = t_max


class DerivativeVanished(NumericalError):
    pass


# domain errors


class OnAxisTarget(ValidationError):
    pass


class WrongHalfPlane(ValidationError):
    pass


class NonPositiveWidth(ValidationError):
    pass


class WrongTimeDomain(ValidationError):
    pass


class ContinuationUndefined(NumericalError):
    pass


class DivergentObservable(NumericalError):
    pass


class NegativeResonanceEnergy(ValidationError):
    pass


class PoleHit(NumericalError):
    pass


class NoPolesInWindow(GamowLabError):
    pass


class WindowTooEarly(NumericalError):
    pass


class InfiniteMoment(ValidationError):
    pass


class DegenerateFit(NumericalError):
    pass
