"""Central and noncentral chi-square / F distributions.

Noncentral CDFs are Poisson-weighted mixtures of central CDFs (the central
pieces ride on scipy's incomplete-beta/gamma routines).  The mixture is
truncated once the accumulated Poisson mass exceeds 1 - 1e-12, far below
the sensitivity of any integer sample-size decision.  Quantiles invert the
CDF by bracketing plus a bisection/secant hybrid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

TAIL_MASS = 1e-12
MAX_NONCENTRALITY = 1e5
QUANTILE_XTOL = 1e-10
QUANTILE_MAX_ITER = 200

CHI_SQUARE = "chi_square"
F = "f"


class DistributionError(ValueError):
    """Invalid distribution parameters."""


def _check(df1: float, df2: float | None, noncentrality: float, family: str) -> None:
    if df1 <= 0:
        raise DistributionError(f"df1 must be positive, got {df1}")
    if family == F and (df2 is None or df2 <= 0):
        raise DistributionError(f"df2 must be positive for F, got {df2}")
    if noncentrality < 0:
        raise DistributionError(f"noncentrality must be >= 0, got {noncentrality}")
    if noncentrality > MAX_NONCENTRALITY:
        raise DistributionError(
            f"noncentrality {noncentrality:g} above supported cap {MAX_NONCENTRALITY:g}")


def _poisson_weights(noncentrality: float) -> tuple[np.ndarray, np.ndarray]:
    """Mixture indices and weights covering all but TAIL_MASS of the Poisson."""
    lam = noncentrality / 2.0
    # generous upper bound on the index needed to reach the target mass
    j_max = int(np.ceil(lam + 12.0 * np.sqrt(lam + 1.0) + 30.0))
    js = np.arange(j_max + 1)
    weights = stats.poisson.pmf(js, lam)
    cum = np.cumsum(weights)
    if cum[-1] < 1.0 - TAIL_MASS:
        raise DistributionError(
            f"mixture series did not converge at noncentrality {noncentrality:g}; "
            f"residual tail mass {1.0 - cum[-1]:.3e}")
    cut = int(np.searchsorted(cum, 1.0 - TAIL_MASS)) + 1
    return js[:cut], weights[:cut]


def noncentral_chisq_cdf(x: float, df: float, noncentrality: float = 0.0) -> float:
    """P(X <= x) for chi-square with ``df`` and noncentrality parameter."""
    _check(df, None, noncentrality, CHI_SQUARE)
    if x <= 0:
        return 0.0
    if noncentrality == 0.0:
        return float(stats.chi2.cdf(x, df))
    js, weights = _poisson_weights(noncentrality)
    return float(weights @ stats.chi2.cdf(x, df + 2 * js))


def noncentral_chisq_sf(x: float, df: float, noncentrality: float = 0.0) -> float:
    """P(X > x); summed on the survival side to keep tail accuracy."""
    _check(df, None, noncentrality, CHI_SQUARE)
    if x <= 0:
        return 1.0
    if noncentrality == 0.0:
        return float(stats.chi2.sf(x, df))
    js, weights = _poisson_weights(noncentrality)
    return float(weights @ stats.chi2.sf(x, df + 2 * js))


def noncentral_f_cdf(x: float, df1: float, df2: float, noncentrality: float = 0.0) -> float:
    """P(F <= x) for F(df1, df2) with numerator noncentrality."""
    _check(df1, df2, noncentrality, F)
    if x <= 0:
        return 0.0
    if noncentrality == 0.0:
        return float(stats.f.cdf(x, df1, df2))
    js, weights = _poisson_weights(noncentrality)
    dfs = df1 + 2 * js
    # conditional on j, the scaled numerator is central chi-square(df1 + 2j)
    return float(weights @ stats.f.cdf(x * df1 / dfs, dfs, df2))


def noncentral_f_sf(x: float, df1: float, df2: float, noncentrality: float = 0.0) -> float:
    _check(df1, df2, noncentrality, F)
    if x <= 0:
        return 1.0
    if noncentrality == 0.0:
        return float(stats.f.sf(x, df1, df2))
    js, weights = _poisson_weights(noncentrality)
    dfs = df1 + 2 * js
    return float(weights @ stats.f.sf(x * df1 / dfs, dfs, df2))


def _invert(cdf, p: float, scale_guess: float) -> float:
    _check_probability(p)
    lo, hi = 0.0, max(scale_guess, 1.0)
    for _ in range(200):
        if cdf(hi) >= p:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise DistributionError(f"failed to bracket quantile at p={p}")
    return float(optimize.brentq(lambda x: cdf(x) - p, lo, hi,
                                 xtol=QUANTILE_XTOL, maxiter=QUANTILE_MAX_ITER))


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DistributionError(f"probability must be in (0, 1), got {p}")


def noncentral_chisq_quantile(p: float, df: float, noncentrality: float = 0.0) -> float:
    _check(df, None, noncentrality, CHI_SQUARE)
    _check_probability(p)
    if noncentrality == 0.0:
        return float(stats.chi2.ppf(p, df))
    return _invert(lambda x: noncentral_chisq_cdf(x, df, noncentrality),
                   p, df + noncentrality)


def noncentral_f_quantile(p: float, df1: float, df2: float, noncentrality: float = 0.0) -> float:
    _check(df1, df2, noncentrality, F)
    _check_probability(p)
    if noncentrality == 0.0:
        return float(stats.f.ppf(p, df1, df2))
    return _invert(lambda x: noncentral_f_cdf(x, df1, df2, noncentrality),
                   p, (df1 + noncentrality) / df1)


@dataclass(frozen=True)
class DistRequest:
    """Parameter bundle for one reference distribution."""

    family: str
    df1: float
    df2: float | None = None
    noncentrality: float = 0.0

    def __post_init__(self):
        if self.family not in (CHI_SQUARE, F):
            raise DistributionError(f"unknown family {self.family!r}")
        _check(self.df1, self.df2, self.noncentrality, self.family)

    def cdf(self, x: float) -> float:
        if self.family == CHI_SQUARE:
            return noncentral_chisq_cdf(x, self.df1, self.noncentrality)
        return noncentral_f_cdf(x, self.df1, self.df2, self.noncentrality)

    def sf(self, x: float) -> float:
        if self.family == CHI_SQUARE:
            return noncentral_chisq_sf(x, self.df1, self.noncentrality)
        return noncentral_f_sf(x, self.df1, self.df2, self.noncentrality)

    def quantile(self, p: float) -> float:
        if self.family == CHI_SQUARE:
            return noncentral_chisq_quantile(p, self.df1, self.noncentrality)
        return noncentral_f_quantile(p, self.df1, self.df2, self.noncentrality)
