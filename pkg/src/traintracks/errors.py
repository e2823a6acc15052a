"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input (letters out of range, bad images, ...)."""


class ParseError(InputError):
    """Syntax error in an input description file."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)


class BudgetExceededError(RuntimeError):
    """A word-length budget was hit.  Carries the partial progress made."""

    def __init__(self, message, m_reached=0, partial=None):
        super().__init__(message)
        self.m_reached = m_reached
        self.partial = partial


class NotIrreducibleError(ValueError):
    """Spectral data was requested for a reducible transition matrix."""


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge within the iteration cap."""

    def __init__(self, message, last_estimate=None):
        super().__init__(message)
        self.last_estimate = last_estimate


class NotALeafSegmentError(ValueError):
    """A path was required to occur in a lamination leaf but does not."""


class PreconditionError(ValueError):
    """An operation was invoked outside its stated domain."""


class InternalConsistencyError(RuntimeError):
    """An invariant that should hold by theory failed numerically.

    Raised e.g. for a normalized length sequence that increases beyond
    floating point slack, or convergence constants with excessive spread.
    Signals broken train-track data rather than bad user input.
    """
