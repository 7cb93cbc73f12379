"""Finite RKHS expansions and the kernel estimators built on them.

An element of the RKHS of ``k`` is represented by a finite expansion
``f = sum_i alpha_i k(x_i, .)``. Inner products reduce to kernel evaluations
between centers, so nothing here ever builds a feature map.
"""

from dataclasses import dataclass
import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_point, as_sample, as_sample_1d, check_positive, clamp_nonnegative
from .exceptions import DegenerateInputError, InvalidInputError
from .info_discrete import LogBase
from .kernels import KernelSpec, gram_matrix


class RkhsExpansion:
    """The function ``f(.) = sum_i coeffs[i] * kernel(centers[i], .)``.

    An expansion with no centers is the zero function; its dimension is
    then taken from ``dim`` (or left open when ``dim`` is None).
    Expansions over the same kernel support ``+``, ``-`` and scalar ``*``.
    """

    __slots__ = ("kernel", "centers", "coeffs")

    def __init__(self, kernel, centers=None, coeffs=None, dim=None):
        if not isinstance(kernel, KernelSpec):
            raise InvalidInputError(f"kernel must be a KernelSpec, got {type(kernel).__name__}")
        if centers is None or len(centers) == 0:
            centers = np.empty((0, dim or 0))
            coeffs = np.empty(0) if coeffs is None else coeffs
        else:
            centers = as_sample(centers, "centers")
        coeffs = np.asarray(coeffs, dtype=np.float64).ravel()
        if coeffs.shape[0] != centers.shape[0]:
            raise InvalidInputError(
                f"{coeffs.shape[0]} coefficients for {centers.shape[0]} centers"
            )
        if not np.all(np.isfinite(coeffs)):
            raise InvalidInputError("coefficients must be finite")
        centers.setflags(write=False)
        coeffs.setflags(write=False)
        self.kernel = kernel
        self.centers = centers
        self.coeffs = coeffs

    @classmethod
    def atom(cls, kernel, x, coeff=1.0):
        """The single kernel section ``coeff * k(x, .)``."""
        return cls(kernel, as_point(x)[None, :], [coeff])

    @property
    def dim(self):
        return self.centers.shape[1]

    def __len__(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"RkhsExpansion(kernel={self.kernel!r}, n_centers={len(self)}, dim={self.dim})"

    def __call__(self, x):
        return expansion_eval(self, x)

    def _combine(self, other, sign):
        if not isinstance(other, RkhsExpansion):
            return NotImplemented
        _check_same_kernel(self, other)
        if len(self) == 0:
            return RkhsExpansion(self.kernel, other.centers, sign * other.coeffs, dim=other.dim)
        if len(other) == 0:
            return self
        _check_dims(self.dim, other.dim)
        return RkhsExpansion(
            self.kernel,
            np.vstack([self.centers, other.centers]),
            np.concatenate([self.coeffs, sign * other.coeffs]),
        )

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        return RkhsExpansion(self.kernel, self.centers, float(scalar) * self.coeffs, dim=self.dim)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _check_same_kernel(f, g):
    if f.kernel != g.kernel:
        raise InvalidInputError(f"kernel mismatch: {f.kernel!r} vs {g.kernel!r}")


def _check_dims(a, b):
    if a != b:
        raise InvalidInputError(f"dimension mismatch: {a} vs {b}")


def expansion_eval(f, x):
    """Evaluate ``f`` at one point (returns float) or at each row of ``x`` (returns array)."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim <= 1
    X = as_point(arr)[None, :] if single else as_sample(arr, "x")
    if len(f) == 0:
        if f.dim and X.shape[1] != f.dim:
            _check_dims(f.dim, X.shape[1])
        vals = np.zeros(X.shape[0])
    else:
        _check_dims(f.dim, X.shape[1])
        vals = f.kernel.pairwise(X, f.centers) @ f.coeffs
    return float(vals[0]) if single else vals


def rkhs_inner_product(f, g):
    """``<f, g> = sum_ij alpha_i beta_j k(x_i, x'_j)``."""
    _check_same_kernel(f, g)
    if len(f) == 0 or len(g) == 0:
        return 0.0
    _check_dims(f.dim, g.dim)
    K = f.kernel.pairwise(f.centers, g.centers)
    return float(f.coeffs @ K @ g.coeffs)


def rkhs_norm(f):
    """RKHS norm ``sqrt(<f, f>)``.

    Raises
    ------
    NumericalFailureError
        If ``<f, f>`` is below -1e-12, which cannot happen for a positive
        definite kernel.
    """
    if len(f) == 0:
        return 0.0
    K = gram_matrix(f.kernel, f.centers)
    sq = float(f.coeffs @ K @ f.coeffs)
    return math.sqrt(clamp_nonnegative(sq, "squared RKHS norm"))


def mean_embedding(X, k):
    """Empirical mean embedding ``(1/N) sum_n k(x_n, .)`` of a sample."""
    X = as_sample(X)
    n = X.shape[0]
    return RkhsExpansion(k, X, np.full(n, 1.0 / n))


def _block_sum(K):
    # exactly rounded and independent of element order
    return math.fsum(K.ravel().tolist())


def mmd_squared(X, Y, k, variant="biased"):
    """Squared maximum mean discrepancy between two samples.

    Parameters
    ----------
    X : array-like of shape (N, d)
    Y : array-like of shape (M, d)
    k : KernelSpec
    variant : {"biased", "unbiased"}
        ``"biased"`` is the V-statistic ``||mu_X - mu_Y||^2`` and is always
        nonnegative. ``"unbiased"`` is the U-statistic that drops the diagonal
        of the within-sample blocks; it needs ``N, M >= 2`` and can be
        negative.

    Notes
    -----
    Block sums are exactly rounded (``math.fsum``), which makes the result
    independent of summation order and exactly symmetric in ``(X, Y)``.
    """
    if variant not in ("biased", "unbiased"):
        raise InvalidInputError(f"unknown MMD variant {variant!r}")
    min_points = 2 if variant == "unbiased" else 1
    X = as_sample(X, "X", min_points=min_points)
    Y = as_sample(Y, "Y", min_points=min_points)
    _check_dims(X.shape[1], Y.shape[1])
    n, m = X.shape[0], Y.shape[0]
    Kxx = gram_matrix(k, X)
    Kyy = gram_matrix(k, Y)
    Kxy = k.pairwise(X, Y)
    sxx, syy, sxy = _block_sum(Kxx), _block_sum(Kyy), _block_sum(Kxy)
    if variant == "biased":
        value = sxx / (n * n) + syy / (m * m) - 2.0 * sxy / (n * m)
        return clamp_nonnegative(value, "biased MMD^2")
    sxx -= math.fsum(np.diag(Kxx).tolist())
    syy -= math.fsum(np.diag(Kyy).tolist())
    return sxx / (n * (n - 1)) + syy / (m * (m - 1)) - 2.0 * sxy / (n * m)


@dataclass(frozen=True)
class BandwidthSpec:
    """Gaussian KDE bandwidth: ``fixed`` with a given ``sigma`` or ``silverman``.

    The Silverman rule ``1.06 * std * N^(-1/5)`` (with the 1/(N-1) standard
    deviation) is only offered for scalar data.
    """

    mode: str = "fixed"
    sigma: float = 1.0

    def __post_init__(self):
        if self.mode not in ("fixed", "silverman"):
            raise InvalidInputError(f"unknown bandwidth mode {self.mode!r}")
        if self.mode == "fixed":
            object.__setattr__(self, "sigma", check_positive(self.sigma, "bandwidth sigma"))

    @classmethod
    def coerce(cls, value):
        if isinstance(value, BandwidthSpec):
            return value
        if isinstance(value, str):
            if value.strip().lower() == "silverman":
                return cls("silverman")
            try:
                value = float(value)
            except ValueError:
                raise InvalidInputError(f"bandwidth must be a number or 'silverman', got {value!r}") from None
        return cls("fixed", value)

    def resolve(self, X):
        """Numeric bandwidth for the (validated, 2-D) sample ``X``."""
        if self.mode == "fixed":
            return self.sigma
        if X.shape[1] != 1:
            raise InvalidInputError("silverman bandwidth is only defined for d = 1")
        if X.shape[0] < 2:
            raise InvalidInputError("silverman bandwidth needs at least 2 points")
        std = float(np.std(X[:, 0], ddof=1))
        if std <= 0:
            raise DegenerateInputError("silverman bandwidth undefined: sample has zero spread")
        return 1.06 * std * X.shape[0] ** (-0.2)


def kde_density(X, bandwidth, x):
    """Parzen-window density estimate with a normalized Gaussian kernel.

    ``p(x) = (1/N) sum_n (2 pi s^2)^(-d/2) exp(-||x - x_n||^2 / (2 s^2))``

    ``x`` may be a single point (float returned) or an ``(M, d)`` array of
    query points (array of densities returned).
    """
    X = as_sample(X)
    bw = BandwidthSpec.coerce(bandwidth)
    sigma = bw.resolve(X)
    f = mean_embedding(X, KernelSpec.gaussian(sigma, normalize=True))
    if X.shape[1] == 1:
        arr = np.asarray(x, dtype=np.float64)
        if arr.ndim == 1 and arr.size != 1:
            x = arr[:, None]
    return expansion_eval(f, x)


def renyi2_entropy_estimate(X, sigma, base=None, method="gram"):
    """Kernel estimate of the order-2 Renyi entropy.

    Computes ``-log_b((1/N^2) sum_nm k(x_n, x_m))`` with ``k`` the normalized
    Gaussian at bandwidth ``sqrt(2) * sigma``, i.e. the integral of the
    squared bandwidth-``sigma`` KDE.

    Parameters
    ----------
    method : {"gram", "embedding"}
        ``"gram"`` sums the Gram matrix directly; ``"embedding"`` takes the
        squared RKHS norm of the empirical mean embedding. Both give the same
        value up to rounding.
    """
    X = as_sample(X)
    sigma = check_positive(sigma, "sigma")
    b = LogBase.coerce(base)
    k = KernelSpec.gaussian(math.sqrt(2.0) * sigma, normalize=True)
    n = X.shape[0]
    if method == "gram":
        information_potential = _block_sum(gram_matrix(k, X)) / (n * n)
    elif method == "embedding":
        information_potential = rkhs_norm(mean_embedding(X, k)) ** 2
    else:
        raise InvalidInputError(f"unknown method {method!r}; expected 'gram' or 'embedding'")
    return -math.log(information_potential) / b.ln_base


def covariance_operator_apply(X, k, f):
    """Apply the empirical covariance operator of ``X`` to ``f``.

    Returns the expansion ``sum_n a_n k(x_n, .)`` with
    ``a_n = (f(x_n) - mean_m f(x_m)) / N``.
    """
    X = as_sample(X)
    if f.kernel != k:
        raise InvalidInputError(f"kernel mismatch: {f.kernel!r} vs {k!r}")
    n = X.shape[0]
    fx = np.atleast_1d(expansion_eval(f, X))
    centered = fx - fx.sum() / n
    return RkhsExpansion(k, X, centered / n)


def hs_norm_empirical(k, X):
    """Hilbert-Schmidt norm of the integral operator of ``k`` under the empirical measure.

    Equal to ``||K||_F / N`` for the Gram matrix ``K``.
    """
    X = as_sample(X)
    K = gram_matrix(k, X)
    n = X.shape[0]
    return math.sqrt(math.fsum((K * K).ravel().tolist())) / n


class ParzenDensity(BaseEstimator):
    """Gaussian kernel density estimator.

    Parameters
    ----------
    bandwidth : float or "silverman", default=1.0

    Attributes
    ----------
    bandwidth_ : float
        Resolved bandwidth.
    sample_ : ndarray of shape (N, d)
    """

    def __init__(self, bandwidth=1.0):
        self.bandwidth = bandwidth

    def fit(self, X, y=None):
        X = as_sample(X)
        self.bandwidth_ = BandwidthSpec.coerce(self.bandwidth).resolve(X)
        self.sample_ = X
        self.n_features_in_ = X.shape[1]
        return self

    def density(self, X):
        """Density at each row of ``X``."""
        check_is_fitted(self)
        X = as_sample(X)
        _check_dims(self.n_features_in_, X.shape[1])
        return kde_density(self.sample_, BandwidthSpec("fixed", self.bandwidth_), X)

    def score_samples(self, X):
        """Log density at each row of ``X`` (same convention as scikit-learn)."""
        with np.errstate(divide="ignore"):
            return np.log(self.density(X))

    def renyi2_entropy(self, base=None):
        """Order-2 Renyi entropy of the fitted density."""
        check_is_fitted(self)
        return renyi2_entropy_estimate(self.sample_, self.bandwidth_, base)


class KernelMeanEmbedding(BaseEstimator):
    """Embeds a sample as its empirical mean in the RKHS of a kernel.

    ``transform`` evaluates the embedding (the witness of the sample) at new
    points; :meth:`mmd_squared` compares the fitted sample against another.

    Parameters
    ----------
    kernel : str, default="gaussian"
    sigma, c, degree : kernel parameters, see :class:`KernelSpec`.
    """

    def __init__(self, kernel="gaussian", sigma=1.0, c=0.0, degree=2):
        self.kernel = kernel
        self.sigma = sigma
        self.c = c
        self.degree = degree

    def _spec(self):
        return KernelSpec(self.kernel, sigma=self.sigma, c=self.c, degree=self.degree)

    def fit(self, X, y=None):
        X = as_sample(X)
        self.embedding_ = mean_embedding(X, self._spec())
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = as_sample(X)
        return expansion_eval(self.embedding_, X)[:, None]

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    def norm(self):
        check_is_fitted(self)
        return rkhs_norm(self.embedding_)

    def mmd_squared(self, Y, variant="biased"):
        check_is_fitted(self)
        return mmd_squared(self.embedding_.centers, Y, self.embedding_.kernel, variant)


def silverman_bandwidth(x):
    """Silverman's rule of thumb for a scalar sample."""
    x = as_sample_1d(x, min_points=2)
    return BandwidthSpec("silverman").resolve(x[:, None])
