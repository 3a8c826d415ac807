"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InsufficientDataError(ValueError):
    """A sample group has too few values for the requested statistic."""


class ShapeError(ValueError):
    """Image or sample dimensions do not agree."""


class NumericError(ArithmeticError):
    """An iterative numerical routine failed to converge."""
