"""Special functions behind the t-test p-values.

Everything here is scalar, pure Python and float64.  The Student t CDF is
reached through the regularized incomplete beta function, which is evaluated
by a continued fraction (modified Lentz).  Degrees of freedom are real-valued
so the Welch test can share the same code path.
"""

import math
from functools import lru_cache
from statistics import NormalDist

from .errors import DomainError, NumericError

__all__ = [
    "ln_gamma",
    "ln_beta",
    "reg_inc_beta",
    "student_t_pdf",
    "student_t_cdf",
    "student_t_quantile",
    "two_sided_p",
]

_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2k / (2k (2k - 1)), Stirling correction terms in powers of 1/x^2.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 10.0

CF_RTOL = 1e-15
CF_MAX_ITER = 300
_TINY = 1e-300

QUANTILE_TOL = 1e-12
_QUANTILE_MAX_ITER = 200


def _check_df(df):
    if not df > 0:  # rejects NaN too
        raise DomainError(f"degrees of freedom must be positive, got {df!r}")


def _stirling_correction(x):
    """ln Gamma(x) minus its Stirling approximation, for x >= 10."""
    r = 1.0 / (x * x)
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * r + c
    return acc / x


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``.

    Small arguments are shifted up to 10 with the recurrence, then the
    Stirling series (eight correction terms) takes over.
    """
    if not x > 0:
        raise DomainError(f"ln_gamma needs x > 0, got {x!r}")
    if math.isinf(x):
        return math.inf
    shift = 1.0
    while x < _STIRLING_MIN:
        shift *= x
        x += 1.0
    value = (x - 0.5) * math.log(x) - x + _HALF_LN_2PI + _stirling_correction(x)
    return value - math.log(shift) if shift != 1.0 else value


def ln_beta(a, b):
    """ln B(a, b) without the cancellation of three large ln-gammas."""
    if not (a > 0 and b > 0):
        raise DomainError(f"ln_beta needs a, b > 0, got a={a!r}, b={b!r}")
    p, q = min(a, b), max(a, b)
    if p >= _STIRLING_MIN:
        corr = _stirling_correction(p) + _stirling_correction(q) - _stirling_correction(p + q)
        return (
            -0.5 * math.log(q)
            + _HALF_LN_2PI
            + corr
            + (p - 0.5) * math.log(p / (p + q))
            + q * math.log1p(-p / (p + q))
        )
    if q >= _STIRLING_MIN:
        corr = _stirling_correction(q) - _stirling_correction(p + q)
        return ln_gamma(p) + corr + p - p * math.log(p + q) + (q - 0.5) * math.log1p(-p / (p + q))
    return ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)


def _beta_cf(x, a, b):
    """Continued fraction for I_x(a, b), modified Lentz."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= CF_RTOL:
            return h
    raise NumericError(
        f"incomplete beta continued fraction did not converge in {CF_MAX_ITER} "
        f"iterations (x={x!r}, a={a!r}, b={b!r})"
    )


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(v):
    c = _SPLITTER * v
    hi = c - (c - v)
    return hi, v - hi


def _two_prod(a, b):
    """a * b as an unevaluated sum p + err, exactly (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _ln_front(x, y, a, b):
    """ln of x^a y^b / B(a, b).

    With both parameters large the three terms are each O(a + b) and cancel
    to O(1); the rearrangement below works with the deviation of x from the
    mode instead, ``d = (a + b) x - a``, evaluated in compensated arithmetic.
    """
    if min(a, b) < _STIRLING_MIN:
        return a * math.log(x) + b * math.log(y) - ln_beta(a, b)
    pa, ea = _two_prod(a, x)
    pb, eb = _two_prod(b, x)
    s, es = _two_sum(pa, -a)
    d = s + (pb + (ea + eb + es))
    corr = _stirling_correction(a) + _stirling_correction(b) - _stirling_correction(a + b)
    return (
        a * math.log1p(d / a)
        + b * math.log1p(-d / b)
        + 0.5 * math.log(a * b / (a + b))
        - _HALF_LN_2PI
        - corr
    )


def _ibeta(x, y, a, b):
    # y == 1 - x, passed separately so callers can supply it without rounding.
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    ln_front = _ln_front(x, y, a, b)
    if x > (a + 1.0) / (a + b + 2.0):
        value = 1.0 - math.exp(ln_front) * _beta_cf(y, b, a) / b
    else:
        value = math.exp(ln_front) * _beta_cf(x, a, b) / a
    return min(1.0, max(0.0, value))


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b)."""
    if not (a > 0 and b > 0):
        raise DomainError(f"reg_inc_beta needs a, b > 0, got a={a!r}, b={b!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta needs 0 <= x <= 1, got {x!r}")
    return _ibeta(x, 1.0 - x, a, b)


def _t_tail(t, df):
    """P(T > |t|) * 2, i.e. I_{df/(df+t^2)}(df/2, 1/2)."""
    t2 = t * t
    if math.isinf(t2):
        return 0.0
    denom = df + t2
    return _ibeta(df / denom, t2 / denom, 0.5 * df, 0.5)


def student_t_pdf(t, df):
    """Density of Student's t with ``df`` degrees of freedom."""
    _check_df(df)
    if math.isinf(t):
        return 0.0
    return math.exp(
        -ln_beta(0.5 * df, 0.5) - 0.5 * math.log(df) - 0.5 * (df + 1.0) * math.log1p(t * t / df)
    )


def student_t_cdf(t, df):
    _check_df(df)
    if math.isnan(t):
        raise DomainError("student_t_cdf got t = NaN")
    half_tail = 0.5 * _t_tail(t, df)
    return half_tail if t < 0 else 1.0 - half_tail


def two_sided_p(t, df):
    """Two-sided p-value, 2 * (1 - F(|t|)), computed from the tail directly."""
    _check_df(df)
    if math.isnan(t):
        raise DomainError("two_sided_p got t = NaN")
    return _t_tail(t, df)


def _initial_guess(p, df):
    z = NormalDist().inv_cdf(p)
    if df < 3:
        return z
    # First Cornish-Fisher correction towards the heavier t tails.
    return z + (z**3 + z) / (4.0 * df)


@lru_cache(maxsize=256)
def student_t_quantile(p, df):
    """Inverse of :func:`student_t_cdf` in ``t``.

    Newton steps on the CDF, seeded from a normal approximation and kept
    inside a shrinking bracket; any step that leaves the bracket becomes a
    bisection.
    """
    _check_df(df)
    if not 0.0 < p < 1.0:
        raise DomainError(f"student_t_quantile needs 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -student_t_quantile(1.0 - p, df)

    # Lower tail: the root is negative.
    hi = 0.0
    t = min(_initial_guess(p, df), -1e-3)
    lo = t
    while student_t_cdf(lo, df) > p:
        hi = lo
        lo *= 2.0
        if math.isinf(lo):
            return -math.inf
    if t <= lo or t >= hi:
        t = 0.5 * (lo + hi)

    for _ in range(_QUANTILE_MAX_ITER):
        f = student_t_cdf(t, df) - p
        if f == 0.0:
            return t
        if f > 0.0:
            hi = t
        else:
            lo = t
        dens = student_t_pdf(t, df)
        step = f / dens if dens > 0.0 else math.inf
        candidate = t - step
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
            step = t - candidate
        t = candidate
        if abs(step) <= QUANTILE_TOL * max(1.0, abs(t)) or hi - lo <= QUANTILE_TOL * max(1.0, abs(t)):
            return t
    raise NumericError(f"student_t_quantile did not converge (p={p!r}, df={df!r})")
