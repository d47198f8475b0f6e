"""Exception hierarchy shared by all modules."""


class ExtremalRMTError(Exception):
    """Base class for all library errors."""


class InvalidProfile(ExtremalRMTError):
    """Variance profile violates an invariant (negativity, asymmetry, NaN, all-zero)."""


class DimensionError(ExtremalRMTError):
    """Incompatible or disallowed matrix dimensions."""


class CapExceeded(ExtremalRMTError):
    """Requested order is above the configured cap for a combinatorial routine."""


class NotACrossing(ExtremalRMTError):
    """The given index quadruple is not a crossing of the pairing."""


class OutOfWindow(ExtremalRMTError):
    """Tail-bound evaluation requested outside the bound's validity window."""


class TransposeRequired(ExtremalRMTError):
    """Rectangular bound needs sigma1 <= sigma2; evaluate the transposed profile."""


class DegenerateProfile(ExtremalRMTError):
    """Operation undefined for an all-zero (sigma_* = 0) profile."""


class NoConvergence(ExtremalRMTError):
    """Iterative solver failed to converge within the iteration budget."""


class ExactnessError(ExtremalRMTError):
    """Exact-rational entries are required but not available for this profile."""
