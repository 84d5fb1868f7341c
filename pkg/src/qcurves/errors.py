"""Exception types shared across the package.

All numerical / estimation failures raise subclasses of :class:`QcurvesError`
so callers (and the CLI) can distinguish them from programming errors.
"""


class QcurvesError(Exception):
    """Base class for all estimation and numerical errors."""


class DomainError(QcurvesError):
    """Input lies outside the mathematical domain of an operation."""


class DegenerateSample(QcurvesError):
    """Sample carries no usable information (e.g. all values equal)."""


class DegenerateQuantile(QcurvesError):
    """A denominator quantile is zero, so a curve ratio is undefined."""


class NoBracket(QcurvesError):
    """A root finder could not bracket a sign change."""


class NonConvergence(QcurvesError):
    """An iterative procedure failed to reach its tolerance."""


class StartFailure(QcurvesError):
    """No usable starting value for an iterative fit."""


class BracketFailure(QcurvesError):
    """A minimizer's bracket could not be expanded to contain the minimum."""
