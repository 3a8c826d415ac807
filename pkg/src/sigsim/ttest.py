"""Two-sample t-tests and the quantities used to read them.

Besides the t statistic and its two-sided p-value, every test reports the raw
mean difference, Cohen's d and a confidence interval for the difference, so a
"significant" result can be set against how large the effect actually is.
:func:`critical_separation` answers the reverse question: how far apart must
two group means be before the pooled test calls them different?
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError, InsufficientDataError
from .specfun import student_t_quantile, two_sided_p

__all__ = [
    "SampleGroup",
    "TTestOutcome",
    "summarize",
    "pooled_t_test",
    "welch_t_test",
    "critical_separation",
    "is_significant",
]


@dataclass(frozen=True)
class SampleGroup:
    """An ordered group of finite measurements, at least two of them."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("sample values must be one-dimensional")
        if values.shape[0] < 2:
            raise InsufficientDataError(f"need at least 2 values, got {values.shape[0]}")
        if not np.isfinite(values).all():
            raise ValueError("sample values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.values.shape[0]

    def __len__(self):
        return self.n


def _as_group(g):
    return g if isinstance(g, SampleGroup) else SampleGroup(g)


@dataclass(frozen=True)
class TTestOutcome:
    t: float
    df: float
    p: float
    mean_diff: float
    pooled_sd: float
    cohen_d: float
    ci_low: float
    ci_high: float
    alpha: float
    degenerate: bool = False

    @property
    def significant(self):
        return is_significant(self.p, self.alpha)


@njit(cache=True, nogil=True)
def _welford(x):
    mean = 0.0
    m2 = 0.0
    for k in range(x.shape[0]):
        delta = x[k] - mean
        mean += delta / (k + 1)
        m2 += delta * (x[k] - mean)
    return mean, m2


def summarize(g):
    """Mean and unbiased variance in one Welford pass."""
    g = _as_group(g)
    mean, m2 = _welford(g.values)
    return float(mean), max(float(m2), 0.0) / (g.n - 1)


def is_significant(p, alpha):
    """Strict ``p < alpha``; a p-value equal to alpha is not significant."""
    return p < alpha


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def _outcome(mean_diff, se, df, pooled_sd, alpha):
    if se > 0.0:
        t = mean_diff / se
        p = two_sided_p(t, df)
        half = student_t_quantile(1.0 - alpha / 2.0, df) * se
        return TTestOutcome(t, df, p, mean_diff, pooled_sd, mean_diff / pooled_sd,
                            mean_diff - half, mean_diff + half, alpha)
    # Both groups constant: no spread to test against.
    if mean_diff == 0.0:
        return TTestOutcome(0.0, df, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, alpha, degenerate=True)
    inf = math.copysign(math.inf, mean_diff)
    return TTestOutcome(inf, df, 0.0, mean_diff, 0.0, inf, mean_diff, mean_diff, alpha,
                        degenerate=True)


def pooled_t_test(a, b, alpha=0.05):
    """Student's equal-variance two-sample t-test, two-sided."""
    _check_alpha(alpha)
    a, b = _as_group(a), _as_group(b)
    m1, v1 = summarize(a)
    m2, v2 = summarize(b)
    n1, n2 = a.n, b.n
    df = float(n1 + n2 - 2)
    pooled_var = ((n1 - 1) * v1 + (n2 - 1) * v2) / df
    pooled_sd = math.sqrt(pooled_var)
    se = pooled_sd * math.sqrt(1.0 / n1 + 1.0 / n2)
    return _outcome(m1 - m2, se, df, pooled_sd, alpha)


def welch_t_test(a, b, alpha=0.05):
    """Unequal-variance (Welch) t-test with Welch-Satterthwaite df.

    ``cohen_d`` is still standardized by the pooled sd so it stays comparable
    with the pooled test.
    """
    _check_alpha(alpha)
    a, b = _as_group(a), _as_group(b)
    m1, v1 = summarize(a)
    m2, v2 = summarize(b)
    n1, n2 = a.n, b.n
    q1, q2 = v1 / n1, v2 / n2
    se2 = q1 + q2
    if se2 > 0.0:
        df = se2 * se2 / (q1 * q1 / (n1 - 1) + q2 * q2 / (n2 - 1))
    else:
        df = float(n1 + n2 - 2)
    pooled_sd = math.sqrt(((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2))
    return _outcome(m1 - m2, math.sqrt(se2), df, pooled_sd, alpha)


TESTS = {"pooled": pooled_t_test, "welch": welch_t_test}


def critical_separation(n_per_group, sd=1.0, alpha=0.05):
    """Mean difference that puts a pooled test of two size-n groups exactly at alpha.

    Assumes both groups have the true common standard deviation ``sd``:
    ``quantile(1 - alpha/2, 2n - 2) * sd * sqrt(2 / n)``.
    """
    if isinstance(n_per_group, bool) or int(n_per_group) != n_per_group or n_per_group < 2:
        raise DomainError(f"n_per_group must be an integer >= 2, got {n_per_group!r}")
    if not sd > 0:
        raise DomainError(f"sd must be positive, got {sd!r}")
    _check_alpha(alpha)
    n = int(n_per_group)
    return student_t_quantile(1.0 - alpha / 2.0, float(2 * n - 2)) * sd * math.sqrt(2.0 / n)
