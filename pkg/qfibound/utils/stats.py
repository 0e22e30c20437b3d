import numpy as np
import scipy.stats


def stratified_normal_nodes(mean, variance, K):
    """Medians of K equal-probability strata of N(mean, variance)."""
    quantiles = (np.arange(1, K + 1) - 0.5) / K
    return mean + np.sqrt(variance) * scipy.stats.norm.ppf(quantiles)


def normal_samples(mean, variance, K, rng):
    return rng.normal(mean, np.sqrt(variance), size=K)


def binomial_std_error(freq, shots):
    """Standard error of a Bernoulli frequency estimated from ``shots`` draws."""
    return np.sqrt(max(freq * (1. - freq), 0.) / shots)


def fit_log_slope(x, y):
    """
    Least-squares slope of ln(y) against x.

    Parameters
    ----------
    x: array-like
    y: array-like of positive values

    Returns
    -------
    (slope, intercept, rvalue)
    """
    y = np.asarray(y, dtype=float)
    res = scipy.stats.linregress(np.asarray(x, dtype=float), np.log(y))
    return res.slope, res.intercept, res.rvalue
