"""Input validation helpers used across the package."""

import numbers

import numpy as np

from .exceptions import InvalidInputError, NumericalFailureError

# Residues in [-CLAMP_TOL, 0) of quantities that are nonnegative in exact
# arithmetic are treated as rounding and clamped to 0.
CLAMP_TOL = 1e-12


def as_sample(X, name="X", min_points=1):
    """Validate ``X`` as a sample of ``N`` points in ``d`` dimensions.

    A 1-D array is read as ``N`` scalar observations (``d = 1``).

    Returns
    -------
    ndarray of shape (N, d), dtype float64
    """
    try:
        arr = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name}: not a numeric array ({exc})") from None
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected 1-D or 2-D data, got ndim={arr.ndim}")
    if arr.shape[1] < 1:
        raise InvalidInputError(f"{name}: points must have dimension d >= 1")
    if arr.shape[0] < min_points:
        raise InvalidInputError(
            f"{name}: need at least {min_points} point(s), got {arr.shape[0]}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or infinite values")
    return arr


def as_sample_1d(x, name="x", min_points=1):
    """Validate ``x`` as a scalar sample; returns a 1-D float array."""
    arr = as_sample(x, name=name, min_points=min_points)
    if arr.shape[1] != 1:
        raise InvalidInputError(f"{name}: expected scalar observations (d=1), got d={arr.shape[1]}")
    return arr[:, 0]


def as_point(x, name="x"):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name}: expected a single vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or infinite values")
    return arr


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise InvalidInputError(f"{name} must be a real number, got {value!r}")
    if not np.isfinite(value) or value <= 0:
        raise InvalidInputError(f"{name} must be finite and > 0, got {value!r}")
    return float(value)


def sequential_sum(a, axis=0):
    """Left-to-right running sum along ``axis``.

    ``np.sum`` uses pairwise summation on contiguous data; this keeps the
    accumulation order fixed and easy to reproduce by hand.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape[axis] == 0:
        return np.sum(a, axis=axis)
    return np.take(np.cumsum(a, axis=axis), -1, axis=axis)


def clamp_nonnegative(value, what):
    """Clamp tiny negative rounding residues to 0; fail on anything worse."""
    if value < -CLAMP_TOL:
        raise NumericalFailureError(
            f"{what} is {value!r} < -{CLAMP_TOL:g}; kernel is not positive definite on this data?"
        )
    return 0.0 if value < 0 else float(value)
