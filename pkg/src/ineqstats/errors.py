"""Exception hierarchy shared across the package.

Everything derives from :class:`IneqStatsError` so callers can catch one
type; the concrete classes say what went wrong.
"""


class IneqStatsError(Exception):
    """Base error for ineqstats."""


class DomainError(IneqStatsError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class InsufficientDataError(IneqStatsError, ValueError):
    """Not enough data points to carry out a fit."""


class NoIntersectionError(IneqStatsError, RuntimeError):
    """The two fitted CDF branches do not cross inside the search bracket."""


class SingularDiffusionError(IneqStatsError, ValueError):
    """The diffusion coefficient vanishes somewhere on the grid."""


class ConfigurationError(IneqStatsError, ValueError):
    """A run configuration violates a stability or consistency requirement."""


class MalformedCurveError(IneqStatsError, ValueError):
    """A Lorenz curve does not satisfy its structural invariants."""


class DegenerateCurveError(IneqStatsError, ValueError):
    """Input data cannot produce a meaningful curve (e.g. zero total)."""


class FormatError(IneqStatsError, ValueError):
    """An input file could not be parsed; message reports the line number."""


class EmptyJoinError(IneqStatsError, ValueError):
    """Joining the input tables produced no usable rows."""
