"""Positive-definite kernels, Gram matrices and PSD verification."""

from dataclasses import dataclass
import math
import numbers

import numpy as np

from ._validation import as_point, as_sample
from .exceptions import InvalidInputError

KERNEL_FAMILIES = ("linear", "polynomial", "gaussian", "laplacian")

# Rows per block when materializing pairwise differences; caps the temporary
# (block, M, d) array at a few tens of MB.
_BLOCK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family together with its parameters.

    Parameters
    ----------
    family : {"linear", "polynomial", "gaussian", "laplacian"}
    sigma : float
        Bandwidth of the gaussian and laplacian kernels.
    c : float
        Additive offset of the polynomial kernel, ``c >= 0``.
    degree : int
        Polynomial degree, a positive integer.
    normalize : bool
        Gaussian only: multiply by ``(2 pi sigma^2)^(-d/2)`` so the kernel
        integrates to one over its second argument.

    Examples
    --------
    >>> k = KernelSpec("polynomial", c=1.0, degree=2)
    >>> k([1.0, 0.0], [1.0, 1.0])
    4.0
    """

    family: str = "gaussian"
    sigma: float = 1.0
    c: float = 0.0
    degree: int = 2
    normalize: bool = False

    def __post_init__(self):
        if self.family == "poly":
            object.__setattr__(self, "family", "polynomial")
        if self.family not in KERNEL_FAMILIES:
            raise InvalidInputError(
                f"unknown kernel family {self.family!r}; expected one of {KERNEL_FAMILIES}"
            )
        if self.family in ("gaussian", "laplacian"):
            s = self.sigma
            if not isinstance(s, numbers.Real) or not math.isfinite(s) or s <= 0:
                raise InvalidInputError(f"{self.family} kernel needs sigma > 0, got {s!r}")
            object.__setattr__(self, "sigma", float(s))
        if self.family == "polynomial":
            if not math.isfinite(self.c) or self.c < 0:
                raise InvalidInputError(f"polynomial kernel needs c >= 0, got {self.c!r}")
            deg = self.degree
            if isinstance(deg, bool) or not float(deg).is_integer() or deg < 1:
                raise InvalidInputError(
                    f"polynomial degree must be a positive integer, got {deg!r}"
                )
            object.__setattr__(self, "degree", int(deg))
            object.__setattr__(self, "c", float(self.c))
        if self.normalize and self.family != "gaussian":
            raise InvalidInputError("normalize is only defined for the gaussian kernel")

    @classmethod
    def linear(cls):
        return cls("linear")

    @classmethod
    def polynomial(cls, c=0.0, degree=2):
        return cls("polynomial", c=c, degree=degree)

    @classmethod
    def gaussian(cls, sigma=1.0, normalize=False):
        return cls("gaussian", sigma=sigma, normalize=normalize)

    @classmethod
    def laplacian(cls, sigma=1.0):
        return cls("laplacian", sigma=sigma)

    def params(self):
        """Only the parameters the family actually uses."""
        if self.family == "polynomial":
            return {"c": self.c, "degree": self.degree}
        if self.family == "gaussian":
            return {"sigma": self.sigma, "normalize": self.normalize}
        if self.family == "laplacian":
            return {"sigma": self.sigma}
        return {}

    def __call__(self, x, y):
        return kernel_eval(self, x, y)

    def pairwise(self, X, Y):
        """Matrix ``[k(X[i], Y[j])]`` for validated 2-D arrays of equal width."""
        n, d = X.shape
        m = Y.shape[0]
        out = np.empty((n, m), dtype=np.float64)
        step = max(1, _BLOCK_ELEMENTS // max(1, m * d))
        for start in range(0, n, step):
            stop = min(n, start + step)
            out[start:stop] = self._block(X[start:stop], Y)
        return out

    def _block(self, X, Y):
        if self.family in ("linear", "polynomial"):
            # elementwise product then reduce over d, symmetric in (x, y)
            dots = (X[:, None, :] * Y[None, :, :]).sum(axis=-1)
            if self.family == "linear":
                return dots
            return (dots + self.c) ** self.degree
        diff = X[:, None, :] - Y[None, :, :]
        if self.family == "laplacian":
            return np.exp(-np.abs(diff).sum(axis=-1) / self.sigma)
        sq = (diff * diff).sum(axis=-1)
        vals = np.exp(-sq / (2.0 * self.sigma**2))
        if self.normalize:
            vals = vals * self.normalizer(X.shape[1])
        return vals

    def normalizer(self, d):
        """``(2 pi sigma^2)^(-d/2)``, the gaussian normalizing constant in ``d`` dimensions."""
        return (2.0 * math.pi * self.sigma**2) ** (-0.5 * d)


def kernel_eval(k, x, y):
    """Evaluate ``k(x, y)`` for two vectors of equal dimension."""
    x = as_point(x, "x")
    y = as_point(y, "y")
    if x.shape != y.shape:
        raise InvalidInputError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    return float(k.pairwise(x[None, :], y[None, :])[0, 0])


def cross_gram(k, X, Y):
    """Rectangular kernel matrix between two samples of the same dimension."""
    X = as_sample(X, "X")
    Y = as_sample(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise InvalidInputError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    return k.pairwise(X, Y)


def gram_matrix(k, X):
    """Gram matrix ``K[i, j] = k(x_i, x_j)``.

    The upper triangle is computed and mirrored, so the result is exactly
    symmetric whatever the floating-point behaviour of the kernel.
    """
    X = as_sample(X)
    K = k.pairwise(X, X)
    upper = np.triu_indices_from(K, k=1)
    K[(upper[1], upper[0])] = K[upper]
    return K


@dataclass(frozen=True)
class PsdReport:
    min_eigenvalue: float
    is_psd: bool
    tol: float
    method: str = "eigen"


def default_psd_tol(K):
    """``1e-8 * N * max(1, max diag)``; eigen-solver error grows with N and scale."""
    n = K.shape[0]
    diag_max = float(np.max(np.diag(K))) if n else 0.0
    return 1e-8 * n * max(1.0, diag_max)


def psd_check(K, tol=None, method="eigen", n_probes=256, random_state=None):
    """Check that a symmetric matrix is positive semidefinite.

    Parameters
    ----------
    K : array-like of shape (N, N)
        Must be exactly symmetric.
    tol : float, optional
        Accept eigenvalues down to ``-tol``. Defaults to :func:`default_psd_tol`.
    method : {"eigen", "probe"}
        ``"eigen"`` uses the smallest eigenvalue from ``numpy.linalg.eigvalsh``.
        ``"probe"`` draws ``n_probes`` random unit vectors ``c`` and reports the
        smallest Rayleigh quotient ``c^T K c``, an upper bound on the minimum
        eigenvalue; it can only disprove PSD-ness.
    random_state : int or numpy Generator, optional
        Seed for the probe vectors.

    Returns
    -------
    PsdReport
    """
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {K.shape}")
    if K.shape[0] == 0:
        raise InvalidInputError("empty matrix")
    if not np.all(np.isfinite(K)):
        raise InvalidInputError("matrix contains NaN or infinite values")
    if not np.array_equal(K, K.T):
        raise InvalidInputError("matrix is not symmetric")
    if tol is None:
        tol = default_psd_tol(K)
    elif not math.isfinite(tol) or tol < 0:
        raise InvalidInputError(f"tol must be finite and >= 0, got {tol!r}")

    if method == "eigen":
        lam = float(np.linalg.eigvalsh(K)[0])
    elif method == "probe":
        rng = np.random.default_rng(random_state)
        C = rng.standard_normal((n_probes, K.shape[0]))
        C /= np.linalg.norm(C, axis=1, keepdims=True)
        lam = float(np.min(np.einsum("pi,ij,pj->p", C, K, C)))
    else:
        raise InvalidInputError(f"unknown method {method!r}; expected 'eigen' or 'probe'")
    return PsdReport(min_eigenvalue=lam, is_psd=lam >= -tol, tol=float(tol), method=method)
