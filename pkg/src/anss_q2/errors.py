"""Exception types raised across the package."""


class NonIntegralInput(ValueError):
    """A value with negative 3-adic valuation was used where a 3-local integer is required."""


class NonInvertibleDenominator(ValueError):
    """Division by an element that is not invertible in the ring was requested."""


class InvalidIndex(ValueError):
    """A generator index violates its family's exponent constraint."""


class FormulaMismatch(AssertionError):
    """Two independent computations of the same quantity disagree.

    This signals an implementation bug, never a data condition.
    """


class LiftFailure(AssertionError):
    """The lift used in the d-tilde chase does not hit its target."""


class SizeLimitExceeded(ValueError):
    """An exhaustive enumeration would exceed its state-space limit."""
