"""Shared exception types."""


class NumericalError(Exception):
    """Base class for numerical failures (non-convergence, overflow guards)."""


class NonConvergenceError(NumericalError):
    """A series or iteration failed to reach its tolerance within budget."""


class QuadratureError(NumericalError):
    """Adaptive integration exhausted its subdivision budget.

    Carries the best available estimate in ``result`` so callers can
    decide whether to accept it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
