"""Exception hierarchy shared by all modules."""


class GclError(Exception):
    """Base class for errors raised by this package."""


class InputError(GclError, ValueError):
    """Malformed or inconsistent input data (files, partitions, embeddings)."""


class InfeasibleDegreeError(GclError, ValueError):
    """The degree sequence admits no positive weight vector.

    Attributes
    ----------
    vertex : int or None
        Index of the vertex whose degree violates ``sum(w) > 2 * max(w)``.
    """

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class ConvergenceError(GclError, RuntimeError):
    """The weight iteration did not reach the requested tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals or [])
