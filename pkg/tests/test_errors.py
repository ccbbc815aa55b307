from reachkit.errors import (
    IllConditionedError,
    InsufficientDataError,
    InvalidInputError,
    NumericError,
    ReachkitError,
    ResolutionError,
    error_slug,
    exit_code_for,
)


def test_hierarchy():
    assert issubclass(InvalidInputError, ReachkitError)
    assert issubclass(NumericError, ReachkitError)
    assert issubclass(IllConditionedError, NumericError)
    assert issubclass(InsufficientDataError, InvalidInputError)
    assert issubclass(ResolutionError, InvalidInputError)


def test_slugs():
    assert error_slug(InvalidInputError("x")) == "invalid-input"
    assert error_slug(InsufficientDataError("x")) == "insufficient-data"
    assert error_slug(ResolutionError("x")) == "resolution"
    assert error_slug(NumericError("x")) == "numeric"
    assert error_slug(IllConditionedError("x")) == "ill-conditioned"


def test_exit_codes():
    assert exit_code_for(InvalidInputError("x")) == 2
    assert exit_code_for(ResolutionError("x")) == 2
    assert exit_code_for(InsufficientDataError("x")) == 2
    assert exit_code_for(NumericError("x")) == 3
    assert exit_code_for(IllConditionedError("x")) == 3
    assert exit_code_for(ReachkitError("x")) == 1
