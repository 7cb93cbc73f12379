"""Entropies, divergences and quasi-arithmetic means of finite distributions.

Conventions
-----------
* ``0 * log 0 = 0`` everywhere.
* Logarithm base is a :class:`LogBase`; plain numbers and the strings
  ``"bits"``, ``"nats"``, ``"e"`` are accepted wherever a base is expected.
* Orders within ``ORDER_ONE_TOL`` of 1 are dispatched to Shannon entropy.
"""

from dataclasses import dataclass, field
import math
import numbers

import numpy as np

from ._validation import CLAMP_TOL, sequential_sum
from .exceptions import InvalidInputError

PMF_SUM_TOL = 1e-9
ORDER_ONE_TOL = 1e-9


@dataclass(frozen=True)
class LogBase:
    """Logarithm base for information quantities (``e`` for nats, 2 for bits)."""

    base: float = math.e

    def __post_init__(self):
        b = self.base
        if not isinstance(b, numbers.Real) or not math.isfinite(b) or b <= 0 or b == 1:
            raise InvalidInputError(f"log base must be > 0 and != 1, got {b!r}")

    @classmethod
    def coerce(cls, value):
        if isinstance(value, LogBase):
            return value
        if value is None:
            return cls()
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("e", "nats", "nat"):
                return cls(math.e)
            if key in ("bits", "bit"):
                return cls(2.0)
            try:
                value = float(key)
            except ValueError:
                raise InvalidInputError(f"unrecognised log base {value!r}") from None
        return cls(float(value))

    @property
    def ln_base(self):
        return math.log(self.base)

    def log(self, x):
        return np.log(x) / self.ln_base


BITS = LogBase(2.0)
NATS = LogBase(math.e)


def _check_prob_vector(probs, normalize):
    p = np.asarray(probs, dtype=np.float64)
    if p.size == 0:
        raise InvalidInputError("a distribution needs at least one outcome")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("probabilities must be finite")
    if np.any(p < 0):
        raise InvalidInputError("probabilities must be >= 0")
    total = float(p.sum())
    if normalize:
        if total <= 0:
            raise InvalidInputError("cannot normalize: total mass is 0")
        return p / total
    if abs(total - 1.0) > PMF_SUM_TOL:
        raise InvalidInputError(f"probabilities sum to {total:.12g}, not 1")
    return p


def _check_labels(labels, size, what):
    labels = tuple(labels)
    if len(labels) != size:
        raise InvalidInputError(f"{what}: {len(labels)} labels for {size} probabilities")
    if len(set(labels)) != len(labels):
        raise InvalidInputError(f"{what}: labels must be distinct")
    return labels


@dataclass(frozen=True, eq=False)
class DiscretePmf:
    """Probability mass function over a finite set of labelled outcomes.

    Pass ``normalize=True`` to rescale nonnegative weights instead of
    rejecting a table that does not sum to 1.
    """

    outcomes: tuple
    probs: np.ndarray
    normalize: bool = field(default=False, repr=False)

    def __post_init__(self):
        p = _check_prob_vector(self.probs, self.normalize)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "outcomes", _check_labels(self.outcomes, p.size, "pmf"))

    @classmethod
    def from_probs(cls, probs, normalize=False):
        probs = np.asarray(probs, dtype=np.float64).ravel()
        return cls(tuple(range(probs.size)), probs, normalize=normalize)

    @classmethod
    def from_dict(cls, mapping, normalize=False):
        return cls(tuple(mapping), np.array(list(mapping.values()), dtype=np.float64), normalize)

    def __len__(self):
        return len(self.outcomes)

    def as_dict(self):
        return dict(zip(self.outcomes, self.probs.tolist()))

    def aligned_to(self, outcomes):
        """Probabilities reordered to follow ``outcomes`` (same label set required)."""
        outcomes = tuple(outcomes)
        if set(outcomes) != set(self.outcomes) or len(outcomes) != len(self.outcomes):
            raise InvalidInputError("outcome sets differ")
        index = {o: i for i, o in enumerate(self.outcomes)}
        return self.probs[[index[o] for o in outcomes]]


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Joint table ``probs[i, j] = P(X = row_labels[i], Y = col_labels[j])``."""

    row_labels: tuple
    col_labels: tuple
    probs: np.ndarray
    normalize: bool = field(default=False, repr=False)

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=np.float64)
        if arr.ndim != 2:
            raise InvalidInputError(f"joint pmf must be a 2-D table, got ndim={arr.ndim}")
        p = _check_prob_vector(arr, self.normalize).reshape(arr.shape)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(
            self, "row_labels", _check_labels(self.row_labels, p.shape[0], "joint rows")
        )
        object.__setattr__(
            self, "col_labels", _check_labels(self.col_labels, p.shape[1], "joint columns")
        )

    @classmethod
    def from_table(cls, table, normalize=False):
        table = np.asarray(table, dtype=np.float64)
        if table.ndim != 2:
            raise InvalidInputError(f"joint pmf must be a 2-D table, got ndim={table.ndim}")
        return cls(tuple(range(table.shape[0])), tuple(range(table.shape[1])), table, normalize)

    @classmethod
    def product(cls, px, py):
        """Independent coupling of two marginals."""
        px, py = _as_pmf(px), _as_pmf(py)
        return cls(px.outcomes, py.outcomes, np.outer(px.probs, py.probs))


def _as_pmf(p):
    if isinstance(p, DiscretePmf):
        return p
    if isinstance(p, dict):
        return DiscretePmf.from_dict(p)
    return DiscretePmf.from_probs(p)


def _as_joint(j):
    if isinstance(j, JointPmf):
        return j
    return JointPmf.from_table(j)


def _plogp_sum(p):
    """sum p log p (natural log) over the support."""
    p = np.asarray(p, dtype=np.float64).ravel()
    nz = p[p > 0]
    return float(sequential_sum(nz * np.log(nz)))


def marginals(joint):
    """Row and column marginals ``(p_X, p_Y)`` of a joint table."""
    j = _as_joint(joint)
    px = DiscretePmf(j.row_labels, j.probs.sum(axis=1))
    py = DiscretePmf(j.col_labels, j.probs.sum(axis=0))
    return px, py


def shannon_entropy(p, base=None):
    """Shannon entropy ``-sum p log_b p``.

    Examples
    --------
    >>> shannon_entropy([0.25] * 4, base="bits")
    2.0
    """
    p = _as_pmf(p)
    b = LogBase.coerce(base)
    h = -_plogp_sum(p.probs) / b.ln_base
    return h + 0.0  # normalizes -0.0


def joint_entropy(joint, base=None):
    j = _as_joint(joint)
    b = LogBase.coerce(base)
    return -_plogp_sum(j.probs) / b.ln_base + 0.0


def conditional_entropy(joint, base=None):
    """H(Y | X) = H(X, Y) - H(X), with X indexing rows."""
    j = _as_joint(joint)
    b = LogBase.coerce(base)
    px, _ = marginals(j)
    h = (_plogp_sum(px.probs) - _plogp_sum(j.probs)) / b.ln_base
    return max(h, 0.0) if h > -CLAMP_TOL else h


def mutual_information(joint, base=None):
    """I(X; Y) = H(X) + H(Y) - H(X, Y); rounding residues below zero are clamped."""
    j = _as_joint(joint)
    b = LogBase.coerce(base)
    px, py = marginals(j)
    mi = (_plogp_sum(j.probs) - _plogp_sum(px.probs) - _plogp_sum(py.probs)) / b.ln_base
    if -CLAMP_TOL <= mi < 0:
        return 0.0
    return mi


def kl_divergence(p, q, base=None):
    """Relative entropy ``sum p log_b(p / q)``.

    Returns ``math.inf`` when ``p`` puts mass where ``q`` has none. Labelled
    pmfs are aligned by outcome label before comparison.
    """
    p, q = _as_pmf(p), _as_pmf(q)
    b = LogBase.coerce(base)
    try:
        qv = q.aligned_to(p.outcomes)
    except InvalidInputError:
        raise InvalidInputError(
            f"outcome sets differ: {sorted(map(str, p.outcomes))} vs {sorted(map(str, q.outcomes))}"
        ) from None
    pv = p.probs
    support = pv > 0
    if np.any(qv[support] == 0):
        return math.inf
    ps, qs = pv[support], qv[support]
    d = float(sequential_sum(ps * (np.log(ps) - np.log(qs)))) / b.ln_base
    return d + 0.0


def _check_order(alpha, name):
    if not isinstance(alpha, numbers.Real) or not math.isfinite(alpha) or alpha <= 0:
        raise InvalidInputError(f"{name} must be finite and > 0, got {alpha!r}")
    return float(alpha)


def renyi_entropy(p, alpha, base=None):
    """Renyi entropy of order ``alpha``: ``log_b(sum p^alpha) / (1 - alpha)``.

    Orders within 1e-9 of 1 return :func:`shannon_entropy`, the limit of the
    closed form.
    """
    alpha = _check_order(alpha, "alpha")
    p = _as_pmf(p)
    if abs(alpha - 1.0) <= ORDER_ONE_TOL:
        return shannon_entropy(p, base)
    b = LogBase.coerce(base)
    nz = p.probs[p.probs > 0]
    power_sum = float(sequential_sum(nz**alpha))
    return math.log(power_sum) / ((1.0 - alpha) * b.ln_base) + 0.0


def tsallis_entropy(p, q):
    """Tsallis entropy ``(1 - sum p^q) / (q - 1)``; ``q`` near 1 gives Shannon in nats."""
    q = _check_order(q, "q")
    p = _as_pmf(p)
    if abs(q - 1.0) <= ORDER_ONE_TOL:
        return shannon_entropy(p, NATS)
    nz = p.probs[p.probs > 0]
    return (1.0 - float(sequential_sum(nz**q))) / (q - 1.0) + 0.0


_GENERATOR_FAMILIES = ("identity", "power", "exponential")


@dataclass(frozen=True)
class KNGenerator:
    """Strictly monotone generator ``g`` of a Kolmogorov-Nagumo mean.

    family : {"identity", "power", "exponential"}
        ``a``, ``a**param`` or ``exp(param * a)``.
    param : float
        Exponent (power) or rate (exponential); must be nonzero.
    """

    family: str = "identity"
    param: float = 1.0

    def __post_init__(self):
        if self.family not in _GENERATOR_FAMILIES:
            raise InvalidInputError(
                f"unknown generator family {self.family!r}; expected one of {_GENERATOR_FAMILIES}"
            )
        if self.family != "identity":
            if not math.isfinite(self.param) or self.param == 0:
                raise InvalidInputError(f"{self.family} generator needs a nonzero parameter")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def power(cls, exponent):
        return cls("power", float(exponent))

    @classmethod
    def exponential(cls, rate):
        return cls("exponential", float(rate))

    def _is_odd_int_power(self):
        r = self.param
        return r > 0 and float(r).is_integer() and int(r) % 2 == 1

    def check_domain(self, values):
        """Raise unless ``g`` is strictly monotone (hence invertible) on ``values``."""
        values = np.asarray(values, dtype=np.float64)
        if self.family != "power" or self._is_odd_int_power():
            return
        lo = float(values.min())
        if self.param > 0 and lo < 0:
            raise InvalidInputError(
                f"power generator with exponent {self.param} is not monotone on negative values"
            )
        if self.param < 0 and lo <= 0:
            raise InvalidInputError(
                f"power generator with exponent {self.param} needs strictly positive values"
            )

    def __call__(self, a):
        a = np.asarray(a, dtype=np.float64)
        if self.family == "identity":
            return a
        if self.family == "power":
            return a**self.param
        return np.exp(self.param * a)

    def inverse(self, y):
        y = float(y)
        if self.family == "identity":
            return y
        if self.family == "power":
            if self._is_odd_int_power():
                return math.copysign(abs(y) ** (1.0 / self.param), y)
            return y ** (1.0 / self.param)
        return math.log(y) / self.param


def kn_mean(values, p, g=None):
    """Kolmogorov-Nagumo (quasi-arithmetic) mean ``g^-1(sum p(a) g(a))``.

    Parameters
    ----------
    values : sequence of float
        One value per outcome of ``p``, in the same order.
    p : DiscretePmf or array-like
    g : KNGenerator, optional
        Defaults to the identity, which gives the arithmetic mean.
    """
    p = _as_pmf(p)
    g = KNGenerator() if g is None else g
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size != len(p):
        raise InvalidInputError(f"{values.size} values for a pmf with {len(p)} outcomes")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("values must be finite")
    g.check_domain(values)
    gv = g(values)
    if not np.all(np.isfinite(gv)):
        raise InvalidInputError("generator overflows on the given values")
    return float(g.inverse(float(sequential_sum(p.probs * gv))))
