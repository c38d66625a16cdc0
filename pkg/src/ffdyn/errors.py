"""Exception hierarchy shared across the package."""


class FfdynError(Exception):
    """Base class for all errors raised by this package."""


class ZeroInverseError(FfdynError, ZeroDivisionError):
    """Attempted to invert 0 in a prime field."""


class EvenCharacteristicError(FfdynError):
    """Operation requires odd characteristic (p = 2 given)."""


class MapSpecError(FfdynError):
    """A map description string or coefficient list could not be parsed."""


class DegenerateMapError(FfdynError):
    """Numerator and denominator share a factor, or the leading coefficient
    vanishes mod p so the intended degree drops."""


class InseparableMapError(FfdynError):
    """The derivative (Wronskian) vanishes identically; critical-point
    machinery is undefined."""


class CharacteristicTooSmallWarning(UserWarning):
    """Advisory: p <= deg, so derivative-based computations are suspect."""


class DegreeTooLargeError(FfdynError):
    """Requested group exceeds the explicit enumeration budget."""


class ClosureBudgetExceededError(FfdynError):
    """Group closure or wreath enumeration exceeded the element budget."""


class DegreeMismatchError(FfdynError):
    """Permutations act on sets of different sizes."""


class UnsupportedFamilyError(FfdynError):
    """Unknown group family name or unsupported degree for a closed form."""


class CoefficientBudgetExceededError(FfdynError):
    """Exact rational coefficients grew past the configured bit budget."""


class NotTransitiveError(FfdynError):
    """Operation requires a transitive group."""


class DomainError(FfdynError):
    """Input outside the mathematical domain of a formula (e.g. log log q
    undefined)."""


class BoundVoidError(FfdynError):
    """An explicit bound formula is void at the given parameters (its
    denominator is not positive)."""


class NonIntegerCriticalError(FfdynError):
    """A critical point of the integer polynomial is not a rational integer."""


class OrbitExplosionError(FfdynError):
    """Exact integer orbit values exceeded the bit budget."""


class ParameterOutOfRangeError(FfdynError):
    """Family or formula parameters outside the supported range."""
