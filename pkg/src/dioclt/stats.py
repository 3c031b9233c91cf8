"""Goodness-of-fit of the normalized statistic against a centered normal law.

The normal law is parameterized by its VARIANCE everywhere (the density uses
exp(-s^2 / (2 sigma)) with sigma a variance); every interface names the
parameter sigma2 to keep the sigma-vs-sigma^2 convention unambiguous.

p-values are asymptotic approximations: the Kolmogorov series is truncated at
100 terms and the Anderson-Darling case-0 (fully specified null) distribution
uses the Marsaglia & Marsaglia polynomial fit.  No parameter-estimation
(Lilliefors-type) correction is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_KOLMOGOROV_TERMS = 100
MIN_SAMPLES = 8


class TooFewSamples(ValueError):
    pass


@dataclass(frozen=True)
class GoodnessOfFit:
    test: str  # "ks" | "ad"
    statistic: float
    p_value: float
    n_samples: int
    sigma2_used: float


def normal_cdf(xi: float, sigma2: float) -> float:
    """P(X < xi) for X centered normal with variance sigma2."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    return 0.5 * math.erfc(-xi / math.sqrt(2.0 * sigma2))


def _normal_cdf_array(x: np.ndarray, sigma2: float) -> np.ndarray:
    # vectorized via the scalar erfc; sample sizes here are modest
    s = math.sqrt(2.0 * sigma2)
    return np.array([0.5 * math.erfc(-xi / s) for xi in x])


def kolmogorov_sf(lam: float) -> float:
    """Asymptotic Kolmogorov survival function, series truncated at 100 terms."""
    if lam <= 0:
        return 1.0
    total = 0.0
    for j in range(1, _KOLMOGOROV_TERMS + 1):
        total += (-1.0) ** (j - 1) * math.exp(-2.0 * j * j * lam * lam)
    return min(1.0, max(0.0, 2.0 * total))


def _ks_statistic(samples: np.ndarray, sigma2: float) -> float:
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    cdf = _normal_cdf_array(x, sigma2)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    return float(max(d_plus, d_minus))


def ks_test(samples, sigma2: float) -> GoodnessOfFit:
    """One-sample Kolmogorov-Smirnov against the centered normal with variance
    sigma2; p-value from the asymptotic law at sqrt(n) * D."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"ks_test needs >= {MIN_SAMPLES} samples, got {n}")
    d = _ks_statistic(samples, sigma2)
    p = kolmogorov_sf(math.sqrt(n) * d)
    return GoodnessOfFit(test="ks", statistic=d, p_value=p, n_samples=n, sigma2_used=sigma2)


def _ad_sf_case0(a2: float) -> float:
    """Marsaglia & Marsaglia (2004) fit to the asymptotic case-0 A^2 CDF."""
    z = a2
    if z <= 0:
        return 1.0
    if z < 2.0:
        cdf = (
            z ** -0.5
            * math.exp(-1.2337141 / z)
            * (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z)
        )
    else:
        cdf = math.exp(
            -math.exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z)
        )
    return min(1.0, max(0.0, 1.0 - cdf))


def _ad_statistic(samples: np.ndarray, sigma2: float) -> float:
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    z = np.clip(_normal_cdf_array(x, sigma2), 1e-300, 1.0 - 1e-16)
    i = np.arange(1, n + 1)
    s = np.sum((2 * i - 1) * (np.log(z) + np.log1p(-z[::-1])))
    return float(-n - s / n)


def ad_test(samples, sigma2: float) -> GoodnessOfFit:
    """Anderson-Darling A^2 against the fully specified centered normal with
    variance sigma2 (case 0: no parameter estimation correction)."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"ad_test needs >= {MIN_SAMPLES} samples, got {n}")
    a2 = _ad_statistic(samples, sigma2)
    p = _ad_sf_case0(a2)
    return GoodnessOfFit(test="ad", statistic=a2, p_value=p, n_samples=n, sigma2_used=sigma2)


def mean_slope(m_values, means):
    """OLS fit of mean counts against the window exponent M.

    Returns (slope, intercept, r2); the slope estimates the mean constant C.
    """
    m_values = np.asarray(m_values, dtype=float)
    means = np.asarray(means, dtype=float)
    if len(m_values) < 3:
        raise ValueError("mean_slope needs at least 3 grid points")
    if len(set(m_values.tolist())) < 2:
        raise ValueError("degenerate grid")
    slope, intercept = np.polyfit(m_values, means, 1)
    fitted = slope * m_values + intercept
    ss_res = float(np.sum((means - fitted) ** 2))
    ss_tot = float(np.sum((means - means.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2
