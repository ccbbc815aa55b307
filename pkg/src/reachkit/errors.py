"""Exception types shared across the package.

The CLI maps these onto exit codes: invalid input exits with 2, numeric
failures with 3. Everything else is a plain crash.
"""


class ReachkitError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(ReachkitError, ValueError):
    """Malformed or out-of-contract input."""


class InsufficientDataError(InvalidInputError):
    """Too few points in a window or cloud for the requested computation."""


class ResolutionError(InvalidInputError):
    """A discretization is too coarse for the requested tolerance."""


class NumericError(ReachkitError, RuntimeError):
    """A numeric routine failed to converge or reach its tolerance."""


class IllConditionedError(NumericError):
    """A linear map required by the computation is numerically singular."""


def error_slug(exc: BaseException) -> str:
    """Short stable identifier for an error, used by the CLI and service."""
    if isinstance(exc, InsufficientDataError):
        return "insufficient-data"
    if isinstance(exc, ResolutionError):
        return "resolution"
    if isinstance(exc, InvalidInputError):
        return "invalid-input"
    if isinstance(exc, IllConditionedError):
        return "ill-conditioned"
    if isinstance(exc, NumericError):
        return "numeric"
    return "error"


def exit_code_for(exc: BaseException) -> int:
    """CLI exit code: 2 for invalid input, 3 for numeric failure, 1 otherwise."""
    if isinstance(exc, InvalidInputError):
        return 2
    if isinstance(exc, NumericError):
        return 3
    return 1
