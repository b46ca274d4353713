"""Exception types shared across the package."""


class FlatlabError(Exception):
    """Base class for all flatlab errors."""


class NotPrime(FlatlabError):
    """A parameter that must be prime is not."""


class LimitExceeded(FlatlabError):
    """A parameter is above the supported range."""


class OutOfRange(FlatlabError):
    """An element lies outside its required interval."""


class EmptySupport(FlatlabError):
    """A nonempty support set was required."""


class NotNormalized(FlatlabError):
    """The polynomial does not have unit L2 norm."""


class InvalidParam(FlatlabError):
    """A parameter is outside its admissible range."""


# riesz-side alias: cutting/spacer parameter validation raises the same type
InvalidParams = InvalidParam


class GridTooSmall(FlatlabError):
    """The sampling grid is below the admissible size for the degree."""


class DegenerateFamily(FlatlabError):
    """Two nodes of a nodal family coincide."""


class InvalidFactor(FlatlabError):
    """A product factor violates its preconditions (e.g. zero constant term)."""


class BudgetExceeded(FlatlabError):
    """An exact expansion would exceed the configured term budget."""
