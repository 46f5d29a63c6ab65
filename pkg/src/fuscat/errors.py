"""Exception hierarchy shared by all modules.

The CLI maps :class:`InputError` (and :class:`PreconditionError`) to exit code 2 and
:class:`AxiomViolation` to exit code 1.
"""


class FuscatError(Exception):
    """Base class of all package errors."""


class InputError(FuscatError, ValueError):
    """Malformed input: unknown label, bad JSON, ill-typed expression, ..."""


class PreconditionError(FuscatError, ValueError):
    """An operation was called on data outside of its domain (e.g. decomposable ring)."""


class NumericalError(FuscatError, RuntimeError):
    """A numerical procedure failed to converge or produced inconsistent data."""


class AxiomViolation(FuscatError):
    """A mathematical check failed; ``report`` carries the witnesses."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
