"""Domain errors raised by qorbit.

Index errors on basis states reuse the builtin IndexError, and file problems
surface as OSError; everything specific to orbit dynamics gets its own class
so callers can tell validation failures apart from plain bad arguments.
"""


class QorbitError(Exception):
    """Base class for all qorbit domain errors."""


class NotBijectiveError(QorbitError):
    """The update rule is not a permutation of the state space."""


class TooLargeError(QorbitError):
    """A requested size exceeds the built-in desk-scale limits."""


class NoReturnError(QorbitError):
    """An orbit walk failed to return to its start (corrupted map)."""


class WrongBasisError(QorbitError):
    """A state arrived in a basis the operation does not accept."""


class OrbitMismatchError(QorbitError):
    """State and spectrum (or operator) belong to different orbits."""


class LengthMismatchError(QorbitError):
    """Paired sample vectors have different lengths."""


class BandwidthMismatchError(QorbitError):
    """A function's band or period does not match the orbit it is used with."""


class EmptySupportError(QorbitError):
    """A state has no occupied modes, so support-based quantities are undefined."""
