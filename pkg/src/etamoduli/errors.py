"""Exception types shared across the package.

All input/precondition problems derive from ValueError so callers (and the
CLI) can treat them uniformly; InternalInvariantError marks conditions that
are mathematically impossible for valid inputs and therefore indicate a bug.
"""


class DimensionMismatchError(ValueError):
    """Vector length does not match the rank of the bilinear form."""


class NonPrimitiveError(ValueError):
    """Class is zero or a proper integer multiple of another integral class."""


class NonCharacteristicError(ValueError):
    """Class does not reduce to the characteristic (Wu) vector mod 2."""


class UnsupportedFormError(ValueError):
    """Operation requires a form in a specific normal shape (diagonal/even)."""


class InternalInvariantError(RuntimeError):
    """A guaranteed invariant failed; indicates a bug, not bad input."""
