"""Independent reference computations used by the tests.

Nothing here imports from ``sigsim``: these are the second route that the
package's own numerics are checked against.
"""

import math

from scipy import integrate


def t_density(x, df):
    """Student t density from math.lgamma (stdlib), not from the package."""
    log_norm = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(log_norm - (df + 1) / 2 * math.log1p(x * x / df))


def t_cdf_by_quadrature(t, df):
    """Adaptive quadrature of the density over (-inf, t]."""
    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=500)
    if t <= 0:
        return integrate.quad(t_density, -math.inf, t, args=(df,), **opts)[0]
    left = integrate.quad(t_density, -math.inf, 0.0, args=(df,), **opts)[0]
    return left + integrate.quad(t_density, 0.0, t, args=(df,), **opts)[0]


def bisect_quantile(cdf, p, lo=-1e6, hi=1e6, iters=200):
    """Plain bisection for cdf(t) = p on a monotone cdf."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def binomial_band(n, p, k_sigma):
    mu = n * p
    sigma = math.sqrt(n * p * (1 - p))
    return mu - k_sigma * sigma, mu + k_sigma * sigma
