"""Exception types shared across the package."""


class ParadoxLabError(Exception):
    """Base class for all package-specific errors."""


class NegativeMonoidExponent(ParadoxLabError):
    """A reduction asked for a negative power of a monoid generator."""


class NonInvertible(ParadoxLabError):
    """An inverse was requested for a non-invertible (semigroup) element."""


class SizeLimit(ParadoxLabError):
    """An enumeration would exceed its configured cap."""


class MissingBit(ParadoxLabError):
    """A rule needed a coordinate bit that was not assigned."""


class Unsatisfiable(ParadoxLabError):
    """An optimisation was requested on an instance with no solutions."""


class VerificationFailed(ParadoxLabError):
    """A constructed witness failed its own satisfaction check."""


class NotAWitness(ParadoxLabError):
    """A colouring handed to a derivation was not violation-free."""


class CoverageGap(ParadoxLabError):
    """A piece decomposition failed coverage away from the boundary."""


class UnsupportedFormat(ParadoxLabError):
    """An unknown report output format was requested."""
