"""Monte Carlo lab for two-sample significance at growing sample sizes.

Random Gaussian pairs are t-tested, the barely-significant pair at each size
is selected, and the pair is rendered as grayscale images so the amount of
separation that ``p < 0.05`` actually demands can be looked at directly.
"""

__version__ = "0.1.0"

from .errors import DomainError, InsufficientDataError, NumericError, ShapeError

__all__ = [
    "__version__",
    "DomainError",
    "InsufficientDataError",
    "NumericError",
    "ShapeError",
]
