"""Seeded Monte Carlo diagnostics for the law of large numbers and the CLT."""

import math

import numpy as np
from scipy.special import ndtr

from ._validation import as_sample_1d
from .exceptions import InvalidInputError


def bernoulli_mean_deviations(n, seeds, p=0.5):
    """``|sample mean - p|`` of ``n`` Bernoulli(p) draws, one value per seed."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    out = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        draws = rng.random(n) < p
        out.append(abs(draws.mean() - p))
    return np.array(out)


def uniform_standardized_means(n, replicates, seed=42, chunk=200):
    """``sqrt(n) (mean - 1/2) / sqrt(1/12)`` for ``replicates`` batches of ``n`` U(0,1) draws."""
    if n < 1 or replicates < 1:
        raise InvalidInputError("n and replicates must be >= 1")
    rng = np.random.default_rng(seed)
    sd = math.sqrt(1.0 / 12.0)
    z = np.empty(replicates)
    for start in range(0, replicates, chunk):
        stop = min(replicates, start + chunk)
        means = rng.random((stop - start, n)).mean(axis=1)
        z[start:stop] = math.sqrt(n) * (means - 0.5) / sd
    return z


def ks_distance_normal(z):
    """Kolmogorov-Smirnov distance between the empirical CDF of ``z`` and N(0, 1)."""
    z = np.sort(as_sample_1d(z, "z"))
    n = z.shape[0]
    cdf = ndtr(z)
    above = np.arange(1, n + 1) / n - cdf
    below = cdf - np.arange(0, n) / n
    return float(max(above.max(), below.max()))
