"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """A search or enumeration would exceed its configured budget or ceiling."""


class ConvergenceError(RuntimeError):
    """An iterative eigensolver did not reach the requested tolerance.

    ``estimate`` carries the best spectral-radius estimate seen.
    """

    def __init__(self, message, estimate=None, residual=None):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


class ParseError(ValueError):
    """Malformed graph6/sparse6 input; ``offset`` is the offending byte index."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset
