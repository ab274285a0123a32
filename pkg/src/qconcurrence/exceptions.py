"""Exceptions raised by qconcurrence.

The CLI maps these onto stable exit codes; see :mod:`qconcurrence.cli`.
"""


class QConcurrenceError(Exception):
    """Base class for all qconcurrence errors."""


class NotPositiveMapError(QConcurrenceError, ValueError):
    """The affine map does not send the Bloch ball into itself."""


class NoPsdWindowError(QConcurrenceError, ArithmeticError):
    """No parameter value makes the quadratic form positive semidefinite.

    This indicates a numerical failure (it cannot occur for a positive
    trace-preserving map) and is reported rather than silently patched.
    """


class InvalidStateError(QConcurrenceError, ValueError):
    """The state is not a unit-trace point of the closed Bloch ball."""


class RankTooHighError(QConcurrenceError, ValueError):
    """The bipartite density operator has rank greater than two."""
