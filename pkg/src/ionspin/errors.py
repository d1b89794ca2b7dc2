"""Exception hierarchy shared by all modules."""


class IonSpinError(Exception):
    """Base class for every error raised by ionspin."""


class ValidationError(IonSpinError, ValueError):
    """Input violates a precondition (bad domain, range, geometry...)."""


class DomainError(ValidationError):
    pass


class RangeError(ValidationError):
    """Argument outside the range where a fit or model is defined."""


class UnsupportedSpeciesError(ValidationError):
    pass


class GeometryError(ValidationError):
    pass


class StabilityError(ValidationError):
    pass


class RegimeError(ValidationError):
    pass


class CapacityError(ValidationError):
    pass


class NumericalError(IonSpinError, ArithmeticError):
    """An iterative method failed to reach its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
