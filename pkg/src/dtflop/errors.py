"""Exception types shared across the package."""


class DTError(Exception):
    """Base class for all package errors."""


class OutsideSymbolicSubring(DTError):
    """A product of two genuinely monodromic classes (or another exotic class) was requested."""


class OddHalfPower(DTError):
    """An exact expression with odd u-degree was evaluated at a number."""


class SizeLimit(DTError):
    """An enumeration would exceed the configured state budget."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class NotPolynomial(DTError):
    """Interpolated counts failed verification at a spare prime."""


class PrimeMismatch(DTError):
    """Two realized classes over different primes were combined."""


class BadPrime(DTError):
    """The prime does not satisfy a required congruence."""


class TailTooLarge(DTError):
    """A truncated expansion cannot certify the requested comparison."""


class HalfPowerResidue(DTError):
    """A normalization exponent is a half-integer and no deferral was requested."""


class UnsupportedSector(DTError):
    """The requested sector/dimension combination has no count-level realization."""


class CachePoisoned(DTError):
    """A cached count failed its checksum."""
