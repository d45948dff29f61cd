"""Exception types shared across the package.

Argument problems raise plain :class:`ValueError` subclasses so callers can
catch them generically; numerical failures raise :class:`EstimationError`.
"""


class PolicyIndexError(Exception):
    """Base class for package-specific errors."""


class ValidationError(PolicyIndexError, ValueError):
    """Malformed input record or configuration value."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateSeriesError(PolicyIndexError, ValueError):
    """Series is constant (or otherwise carries no variation to model)."""


class DegenerateDictionaryError(PolicyIndexError, ValueError):
    """Every keyword has zero differentiation, so no weights exist."""


class AlignmentError(PolicyIndexError, ValueError):
    """Series share no common dates under the chosen alignment policy."""


class EstimationError(PolicyIndexError, RuntimeError):
    """Likelihood optimisation failed to converge.

    ``best_loglik`` carries the best log-likelihood reached across restarts.
    """

    def __init__(self, message, best_loglik=float("nan")):
        self.best_loglik = best_loglik
        super().__init__(f"{message} (best loglik {best_loglik:.6g})")


class StageError(PolicyIndexError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, error):
        self.stage = stage
        self.error = error
        super().__init__(f"[{stage}] {type(error).__name__}: {error}")
