"""Exception types raised across the package."""


class CBIDError(Exception):
    """Base class for errors raised by cbid."""


class ArityError(CBIDError, ValueError):
    """Operands live in rings with different numbers of variables, or a variable index is out of range."""


class PoleError(CBIDError, ZeroDivisionError):
    """A substitution makes a denominator vanish identically."""


class ParameterError(CBIDError, ValueError):
    """Identity parameters violate the family's preconditions."""


class BadPrimeError(CBIDError, ValueError):
    """A coefficient denominator is divisible by the chosen prime."""


class DegenerateSamplingError(CBIDError, RuntimeError):
    """Random sampling kept landing on poles."""
