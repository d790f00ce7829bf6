"""Exception types shared across the package."""


class NormLabError(Exception):
    """Base class for all normlab errors."""


class DimensionMismatchError(NormLabError):
    """Vector or matrix dimensions do not match the norm spec."""


class SpecParseError(NormLabError):
    """A norm spec, vector, or complex literal failed to parse."""


class NTooSmallError(NormLabError):
    """rho_n requires n > 2; the root-sum identity fails at n = 2."""


class NotSmoothError(NormLabError):
    """Operation requires a smooth norm family (unique supporting functional)."""


class ZeroBaseError(NormLabError):
    """Operation requires a nonzero base vector x."""


class ZeroMapError(NormLabError):
    """Linear map analysis requires a nonzero matrix."""


class RUnknownError(NormLabError):
    """The dual segment constant R(X*) is unknown for this norm family."""
