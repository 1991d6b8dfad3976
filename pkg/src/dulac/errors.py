"""Exception types shared across the package.

The CLI maps these onto exit codes: SystemFileError -> 2,
HypothesisError -> 3, InternalInvariantError -> 4.
"""


class DulacError(Exception):
    """Base class for all package errors."""


class SystemFileError(DulacError):
    """Malformed or invalid system description file."""


class HypothesisError(DulacError):
    """A documented precondition of an operation is not met by the input."""


class InternalInvariantError(DulacError):
    """An invariant the implementation guarantees was violated; a bug."""
