"""Empirical moments, standardization and the Gaussian likelihood.

All estimators use the 1/N normalization unless stated otherwise, and
accumulate sums strictly left to right so results are reproducible.
"""

from dataclasses import dataclass
import math

import numpy as np
from sklearn.base import BaseEstimator, OneToOneFeatureMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_sample, as_sample_1d, check_positive, sequential_sum
from .exceptions import DegenerateInputError, InvalidInputError


@dataclass(frozen=True)
class GaussianParams:
    """Location ``mu`` and variance ``sigma2`` of a univariate normal."""

    mu: float
    sigma2: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise InvalidInputError(f"mu must be finite, got {self.mu!r}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise InvalidInputError(f"sigma2 must be finite and > 0, got {self.sigma2!r}")


def sample_mean(X):
    """Componentwise sample mean.

    Parameters
    ----------
    X : array-like of shape (N,) or (N, d)

    Returns
    -------
    ndarray of shape (d,)
    """
    X = as_sample(X)
    # shifting by the first point makes constant data exact
    origin = X[0]
    with np.errstate(over="ignore", invalid="ignore"):
        mean = origin + sequential_sum(X - origin, axis=0) / X.shape[0]
    if not np.all(np.isfinite(mean)):
        mean = sequential_sum(X / X.shape[0], axis=0)
    return mean


def sample_variance(X, unbiased=False):
    """Componentwise sample variance, 1/N by default and 1/(N-1) if ``unbiased``."""
    X = as_sample(X, min_points=2 if unbiased else 1)
    n = X.shape[0]
    centered = X - sample_mean(X)
    ss = sequential_sum(centered * centered, axis=0)
    return ss / (n - 1 if unbiased else n)


def sample_covariance(x, y):
    """Plug-in covariance (1/N) sum (x_i - xbar)(y_i - ybar) of two scalar samples."""
    x = as_sample_1d(x, name="x")
    y = as_sample_1d(y, name="y")
    if x.shape != y.shape:
        raise InvalidInputError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    dx = x - sample_mean(x)[0]
    dy = y - sample_mean(y)[0]
    return float(sequential_sum(dx * dy) / x.shape[0])


def standardize(x):
    """Center and scale a scalar sample to mean 0 and (1/N) variance 1."""
    x = as_sample_1d(x)
    var = sample_variance(x)[0]
    if var <= 0:
        raise DegenerateInputError("cannot standardize a sample with zero variance")
    return (x - sample_mean(x)[0]) / math.sqrt(var)


def gaussian_log_likelihood(x, params):
    """Natural-log likelihood of a scalar sample under N(mu, sigma2).

    ``params`` may be a :class:`GaussianParams` or a ``(mu, sigma2)`` pair.
    """
    if not isinstance(params, GaussianParams):
        params = GaussianParams(*params)
    x = as_sample_1d(x)
    n = x.shape[0]
    r = x - params.mu
    ss = float(sequential_sum(r * r))
    return -0.5 * n * math.log(2.0 * math.pi * params.sigma2) - ss / (2.0 * params.sigma2)


def gaussian_mle_mean(x):
    """Maximum-likelihood location of a normal model with known variance.

    The log-likelihood is a concave quadratic in ``mu`` whose stationary point
    is the sample mean, so the estimate is returned in closed form.
    """
    x = as_sample_1d(x)
    return float(sample_mean(x)[0])


class Standardizer(OneToOneFeatureMixin, TransformerMixin, BaseEstimator):
    """Per-feature z-scoring with the 1/N variance convention.

    Unlike ``sklearn.preprocessing.StandardScaler`` a constant feature is an
    error rather than being passed through unscaled.

    Attributes
    ----------
    mean_ : ndarray of shape (d,)
    scale_ : ndarray of shape (d,)
        Square root of the 1/N variance of each feature.
    n_features_in_ : int
    """

    def fit(self, X, y=None):
        X = as_sample(X)
        var = sample_variance(X)
        if np.any(var <= 0):
            bad = np.flatnonzero(var <= 0).tolist()
            raise DegenerateInputError(f"zero variance in feature(s) {bad}")
        self.mean_ = sample_mean(X)
        self.scale_ = np.sqrt(var)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = self._check_width(as_sample(X))
        return (X - self.mean_) / self.scale_

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = self._check_width(as_sample(X))
        return X * self.scale_ + self.mean_

    def _check_width(self, X):
        if X.shape[1] != self.n_features_in_:
            raise InvalidInputError(
                f"X has {X.shape[1]} features, Standardizer was fitted with {self.n_features_in_}"
            )
        return X


def gaussian_log_likelihood_grid(x, mus, sigma2=1.0):
    """Log-likelihood evaluated on a grid of candidate means (vectorized helper)."""
    x = as_sample_1d(x)
    sigma2 = check_positive(sigma2, "sigma2")
    mus = np.asarray(mus, dtype=np.float64)
    n = x.shape[0]
    ss = ((x[None, :] - mus[:, None]) ** 2).sum(axis=1)
    return -0.5 * n * math.log(2.0 * math.pi * sigma2) - ss / (2.0 * sigma2)
