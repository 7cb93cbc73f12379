"""Least squares as orthogonal projection, plus central moments and moment tensors."""

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_sample, as_sample_1d, sequential_sum
from .exceptions import DegenerateInputError, InvalidInputError
from .prob_core import sample_mean, sample_variance

SINGULAR_RTOL = 1e-10
MAX_TENSOR_DIM = 16


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """Projection of the response onto span{1, X_1, ..., X_d}.

    ``fitted = mean_y + (X - x_mean) @ betas`` and
    ``residuals = response - fitted``.
    """

    mean_y: float
    betas: np.ndarray
    x_mean: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray

    @property
    def intercept(self):
        """Intercept of the uncentered form ``y = intercept + X @ betas``."""
        return float(self.mean_y - self.x_mean @ self.betas)

    @property
    def residual_norm(self):
        return float(np.sqrt(sequential_sum(self.residuals * self.residuals)))

    def predict(self, X):
        X = as_sample(X)
        if X.shape[1] != self.betas.shape[0]:
            raise InvalidInputError(
                f"X has {X.shape[1]} predictors, fit has {self.betas.shape[0]}"
            )
        return self.mean_y + (X - self.x_mean) @ self.betas


def ols_fit(X, y):
    """Ordinary least squares via the normal equations on centered data.

    Parameters
    ----------
    X : array-like of shape (N,) or (N, d)
        Predictors.
    y : array-like of shape (N,)
        Response.

    Returns
    -------
    RegressionFit

    Raises
    ------
    DegenerateInputError
        If the centered predictors are (numerically) collinear: smallest
        singular value at most ``1e-10`` times the largest.
    """
    X = as_sample(X, "X")
    y = as_sample_1d(y, "y")
    if y.shape[0] != X.shape[0]:
        raise InvalidInputError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    x_mean = sample_mean(X)
    mean_y = float(sample_mean(y)[0])
    Xc = X - x_mean
    yc = y - mean_y

    sv = np.linalg.svd(Xc, compute_uv=False)
    if sv.size < X.shape[1] or sv[0] == 0 or sv[-1] <= SINGULAR_RTOL * sv[0]:
        smallest = float(sv[-1]) if sv.size == X.shape[1] else 0.0
        raise DegenerateInputError(
            f"centered design is singular or collinear: min/max singular value "
            f"{smallest:.3g}/{float(sv[0]) if sv.size else 0.0:.3g} "
            f"does not exceed relative tolerance {SINGULAR_RTOL:g}"
        )
    betas = np.linalg.solve(Xc.T @ Xc, Xc.T @ yc)
    fitted = mean_y + Xc @ betas
    return RegressionFit(
        mean_y=mean_y, betas=betas, x_mean=x_mean, fitted=fitted, residuals=y - fitted
    )


class LeastSquaresProjection(RegressorMixin, BaseEstimator):
    """Linear regression estimator backed by :func:`ols_fit`.

    Attributes
    ----------
    coef_ : ndarray of shape (d,)
    intercept_ : float
    fit_ : RegressionFit
    """

    def fit(self, X, y):
        self.fit_ = ols_fit(X, y)
        self.coef_ = self.fit_.betas
        self.intercept_ = self.fit_.intercept
        self.n_features_in_ = self.coef_.shape[0]
        return self

    def predict(self, X):
        check_is_fitted(self)
        return self.fit_.predict(X)


def central_moment(x, k):
    """``(1/N) sum (x_i - xbar)^k`` for integer ``k >= 2``."""
    x = as_sample_1d(x)
    if isinstance(k, bool) or not float(k).is_integer() or k < 2:
        raise InvalidInputError(f"moment order must be an integer >= 2, got {k!r}")
    k = int(k)
    if k == 2:
        return float(sample_variance(x)[0])
    c = x - sample_mean(x)[0]
    # repeated multiplication, same rounding as moment_tensor
    prod = c.copy()
    for _ in range(k - 1):
        prod *= c
    return float(sequential_sum(prod) / x.shape[0])


def standardized_moment(x, k):
    """Central moment of order ``k >= 3`` divided by ``variance^(k/2)``.

    ``k = 3`` is the skewness and ``k = 4`` the (non-excess) kurtosis.
    """
    x = as_sample_1d(x)
    if isinstance(k, bool) or not float(k).is_integer() or k < 3:
        raise InvalidInputError(f"standardized moment order must be an integer >= 3, got {k!r}")
    var = float(sample_variance(x)[0])
    if var <= 0:
        raise DegenerateInputError("standardized moments are undefined for zero variance")
    return central_moment(x, k) / var ** (k / 2)


def moment_tensor(X, k):
    """Centered moment tensor of order ``k`` in {2, 3, 4}.

    Entry ``(i_1, ..., i_k)`` is ``(1/N) sum_n prod_j (x_n[i_j] - xbar[i_j])``.
    Each distinct entry is computed once from its sorted multi-index and
    copied to every permutation, so the tensor is exactly symmetric.

    Returns
    -------
    ndarray of shape (d,) * k
    """
    X = as_sample(X)
    if k not in (2, 3, 4):
        raise InvalidInputError(f"tensor order must be 2, 3 or 4, got {k!r}")
    n, d = X.shape
    if d > MAX_TENSOR_DIM:
        raise InvalidInputError(f"dimension {d} exceeds the dense tensor limit {MAX_TENSOR_DIM}")
    C = X - sample_mean(X)
    T = np.empty((d,) * k)
    for idx in combinations_with_replacement(range(d), k):
        prod = C[:, idx[0]].copy()
        for j in idx[1:]:
            prod *= C[:, j]
        val = float(sequential_sum(prod) / n)
        for perm in set(permutations(idx)):
            T[perm] = val
    return T
