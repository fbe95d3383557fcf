"""Exception hierarchy for the gapsearch package.

All library-specific failures derive from :class:`GapSearchError` so callers
can catch one base class.  Precondition violations on plain scalar arguments
additionally derive from :class:`ValueError`.
"""


class GapSearchError(Exception):
    """Base class for all gapsearch errors."""


class DomainError(GapSearchError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class LayoutError(GapSearchError, ValueError):
    """A search-domain layout violates the required mesh ordering."""


class DegenerateTruncationError(GapSearchError, ArithmeticError):
    """The deleted subintervals remove essentially all probability mass."""


class ConfigurationError(GapSearchError, ValueError):
    """Mutually inconsistent options (counts, ranges, or missing sections)."""


class ConvergenceError(GapSearchError, ArithmeticError):
    """An iterative numeric scheme failed to reach its tolerance."""


class EvaluationError(GapSearchError, ArithmeticError):
    """An objective evaluation produced a non-finite value."""


class NewtonStallError(GapSearchError, ArithmeticError):
    """No feasible descent step could be found.

    Carries the iteration trace accumulated so far in ``trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []
