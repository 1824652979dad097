"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InputError(ValueError):
    """An integrand or other callable produced an invalid value (NaN)."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature ran out of its evaluation budget.

    The best estimate reached so far is kept on ``result`` so callers can
    decide whether it is good enough.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result
