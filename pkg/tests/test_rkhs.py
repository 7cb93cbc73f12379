import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from rkhsinfo import (
    DegenerateInputError,
    InvalidInputError,
    KernelSpec,
    NumericalFailureError,
    RkhsExpansion,
    covariance_operator_apply,
    expansion_eval,
    gram_matrix,
    hs_norm_empirical,
    kde_density,
    mean_embedding,
    mmd_squared,
    renyi2_entropy_estimate,
    rkhs_inner_product,
    rkhs_norm,
)
from rkhsinfo.rkhs import BandwidthSpec, silverman_bandwidth

G1 = KernelSpec.gaussian(1.0)


def random_expansion(rng, k, d=2, max_centers=20):
    m = rng.integers(1, max_centers + 1)
    return RkhsExpansion(k, rng.normal(size=(m, d)), rng.normal(size=m))


def gram_sum_oracle(k, X):
    """Plain double loop over kernel_eval."""
    total = 0.0
    for a in X:
        for b in X:
            total += k(a, b)
    return total


# -- expansions ---------------------------------------------------------------

def test_expansion_eval_examples():
    zero = RkhsExpansion(G1, dim=1)
    assert expansion_eval(zero, [3.0]) == 0.0
    assert expansion_eval(RkhsExpansion.atom(G1, [0.4]), [0.4]) == 1.0
    f = RkhsExpansion(G1, [[0.0], [1.0]], [2.0, -1.0])
    assert f([0.0]) == pytest.approx(2 - math.exp(-0.5), abs=1e-15)
    with pytest.raises(InvalidInputError):
        f([0.0, 1.0, 2.0])


def test_expansion_eval_vectorized():
    f = RkhsExpansion(G1, [[0.0], [1.0]], [2.0, -1.0])
    np.testing.assert_allclose(f(np.array([[0.0], [1.0]])), [f([0.0]), f([1.0])], rtol=1e-15)


def test_expansion_validation():
    with pytest.raises(InvalidInputError):
        RkhsExpansion(G1, [[0.0], [1.0]], [1.0])
    with pytest.raises(InvalidInputError):
        RkhsExpansion(G1, [[0.0]], [np.nan])
    with pytest.raises(InvalidInputError):
        RkhsExpansion("gaussian", [[0.0]], [1.0])


def test_inner_product_examples():
    x, y = np.array([0.1, 0.2]), np.array([-1.0, 0.5])
    kx, ky = RkhsExpansion.atom(G1, x), RkhsExpansion.atom(G1, y)
    assert rkhs_inner_product(kx, ky) == G1(x, y)
    assert rkhs_inner_product(kx, RkhsExpansion(G1)) == 0.0
    with pytest.raises(InvalidInputError):
        rkhs_inner_product(kx, RkhsExpansion.atom(KernelSpec.gaussian(2.0), y))


def test_inner_product_matches_double_sum_oracle():
    rng = np.random.default_rng(0)
    f, g = random_expansion(rng, G1), random_expansion(rng, G1)
    oracle = sum(
        a * b * G1(xi, yj) for a, xi in zip(f.coeffs, f.centers) for b, yj in zip(g.coeffs, g.centers)
    )
    assert rkhs_inner_product(f, g) == pytest.approx(oracle, abs=1e-12)


def test_reproducing_property():
    rng = np.random.default_rng(1)
    for _ in range(200):
        f = random_expansion(rng, G1, d=3)
        x = rng.normal(size=3)
        assert abs(rkhs_inner_product(f, RkhsExpansion.atom(G1, x)) - f(x)) <= 1e-12


def test_norm_examples():
    assert rkhs_norm(RkhsExpansion.atom(G1, [5.0])) == 1.0
    assert rkhs_norm(RkhsExpansion(G1)) == 0.0
    f = RkhsExpansion(G1, [[0.0], [1.0]], [1.0, 1.0])
    assert rkhs_norm(f) == pytest.approx(math.sqrt(2 + 2 * math.exp(-0.5)), abs=1e-15)


def test_norm_rejects_non_psd_residue():
    class Broken(KernelSpec):
        def pairwise(self, X, Y):
            return -np.ones((X.shape[0], Y.shape[0]))

    with pytest.raises(NumericalFailureError):
        rkhs_norm(RkhsExpansion(Broken("linear"), [[0.0]], [1.0]))


def test_hilbert_space_identities():
    rng = np.random.default_rng(2)
    for _ in range(100):
        f, g = random_expansion(rng, G1), random_expansion(rng, G1)
        nf, ng = rkhs_norm(f), rkhs_norm(g)
        assert abs(rkhs_inner_product(f, g)) <= nf * ng + 1e-10
        lhs = rkhs_norm(f + g) ** 2 + rkhs_norm(f - g) ** 2
        assert lhs == pytest.approx(2 * nf**2 + 2 * ng**2, abs=1e-10)
        g_perp = g - (rkhs_inner_product(f, g) / nf**2) * f
        assert abs(rkhs_inner_product(f, g_perp)) <= 1e-9
        assert rkhs_norm(f + g_perp) ** 2 == pytest.approx(nf**2 + rkhs_norm(g_perp) ** 2, abs=1e-9)


# -- mean embedding and MMD ---------------------------------------------------

def test_mean_embedding_examples():
    mu = mean_embedding([[0.5, 0.5]], G1)
    assert list(mu.coeffs) == [1.0]
    dup = mean_embedding([[0.5, 0.5], [0.5, 0.5]], G1)
    assert list(dup.coeffs) == [0.5, 0.5]
    for x in ([0.0, 0.0], [1.0, -2.0]):
        assert dup(x) == pytest.approx(mu(x), rel=1e-15)
    X = np.random.default_rng(3).normal(size=(15, 2))
    assert rkhs_norm(mean_embedding(X, G1)) ** 2 == pytest.approx(gram_sum_oracle(G1, X) / 225, abs=1e-12)
    with pytest.raises(InvalidInputError):
        mean_embedding(np.empty((0, 2)), G1)


def test_mmd_examples():
    X = np.random.default_rng(4).normal(size=(20, 2))
    assert mmd_squared(X, X, G1) == 0.0
    assert mmd_squared(X, X[::-1], G1) == 0.0
    a, b = np.array([0.0, 1.0]), np.array([0.5, -0.5])
    assert mmd_squared([a], [b], G1) == pytest.approx(2 - 2 * G1(a, b), abs=1e-15)


def test_mmd_biased_equals_embedding_distance():
    rng = np.random.default_rng(5)
    for k in (G1, KernelSpec.laplacian(0.7), KernelSpec.polynomial(1.0, 2)):
        X, Y = rng.normal(size=(17, 3)), rng.normal(0.3, 1.2, size=(11, 3))
        diff = mean_embedding(X, k) - mean_embedding(Y, k)
        assert mmd_squared(X, Y, k) == pytest.approx(rkhs_norm(diff) ** 2, abs=1e-12)


def test_mmd_unbiased_matches_loop_oracle():
    rng = np.random.default_rng(6)
    X, Y = rng.normal(size=(6, 2)), rng.normal(size=(5, 2))
    n, m = len(X), len(Y)
    xx = sum(G1(X[i], X[j]) for i in range(n) for j in range(n) if i != j) / (n * (n - 1))
    yy = sum(G1(Y[i], Y[j]) for i in range(m) for j in range(m) if i != j) / (m * (m - 1))
    xy = sum(G1(a, b) for a in X for b in Y) / (n * m)
    assert mmd_squared(X, Y, G1, "unbiased") == pytest.approx(xx + yy - 2 * xy, abs=1e-14)


def test_mmd_symmetric_exactly():
    rng = np.random.default_rng(7)
    for variant in ("biased", "unbiased"):
        X, Y = rng.normal(size=(9, 2)), rng.normal(size=(13, 2))
        assert mmd_squared(X, Y, G1, variant) == mmd_squared(Y, X, G1, variant)


def test_mmd_errors():
    with pytest.raises(InvalidInputError):
        mmd_squared([[0.0]], [[1.0], [2.0]], G1, "unbiased")
    with pytest.raises(InvalidInputError):
        mmd_squared([[0.0]], [[1.0]], G1, "median")
    with pytest.raises(InvalidInputError):
        mmd_squared([[0.0]], [[1.0, 2.0]], G1)


# -- KDE and Renyi-2 ------------------------------------------------------------

def test_kde_examples():
    assert kde_density([[0.7]], 1.0, [0.7]) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert kde_density([[0.7]], 1.0, [0.7]) == pytest.approx(0.39894, abs=1e-5)
    X = np.random.default_rng(8).normal(size=30)
    grid = np.linspace(-10, 10, 101)
    assert np.all(kde_density(X, 0.4, grid) >= 0)


def test_kde_integrates_to_one():
    X = np.random.default_rng(9).normal(size=50)
    sigma = 0.5
    grid = np.linspace(X.min() - 8 * sigma, X.max() + 8 * sigma, 10_000)
    assert abs(trapezoid(kde_density(X, sigma, grid), grid) - 1.0) <= 1e-3


def test_kde_2d_matches_direct_sum():
    rng = np.random.default_rng(10)
    X, q, s = rng.normal(size=(7, 2)), np.array([0.2, -0.1]), 0.8
    oracle = np.mean([math.exp(-np.sum((q - x) ** 2) / (2 * s * s)) for x in X]) / (2 * math.pi * s * s)
    assert kde_density(X, s, q) == pytest.approx(oracle, rel=1e-13)


def test_silverman_bandwidth():
    x = np.array([0.0, 1.0, 2.0, 4.0])
    std = math.sqrt(sum((v - 1.75) ** 2 for v in x) / 3)
    assert silverman_bandwidth(x) == pytest.approx(1.06 * std * 4 ** (-0.2), rel=1e-14)
    assert kde_density(x, "silverman", [1.0]) == pytest.approx(kde_density(x, silverman_bandwidth(x), [1.0]))
    with pytest.raises(DegenerateInputError):
        kde_density([1.0, 1.0, 1.0], "silverman", [1.0])
    with pytest.raises(InvalidInputError):
        kde_density([[1.0, 2.0], [0.0, 1.0]], "silverman", [1.0, 1.0])
    with pytest.raises(InvalidInputError):
        BandwidthSpec.coerce("scott")
    with pytest.raises(InvalidInputError):
        BandwidthSpec.coerce(-1.0)


def test_renyi2_examples():
    assert renyi2_entropy_estimate([[0.0]], 1.0) == pytest.approx(math.log(2 * math.sqrt(math.pi)), abs=1e-14)
    assert renyi2_entropy_estimate([[0.0]], 1.0) == pytest.approx(1.2655, abs=1e-4)
    with pytest.raises(InvalidInputError):
        renyi2_entropy_estimate([[0.0]], 0.0)


def test_renyi2_equals_integral_of_squared_kde():
    # the order-2 estimate is -log of the integral of the squared bandwidth-sigma KDE
    X = np.array([-0.4, 0.3, 1.1, 2.0])
    sigma = 0.6
    grid = np.linspace(-8, 10, 40_001)
    integral = trapezoid(kde_density(X, sigma, grid) ** 2, grid)
    assert renyi2_entropy_estimate(X, sigma) == pytest.approx(-math.log(integral), abs=1e-9)


def test_renyi2_paths_agree():
    rng = np.random.default_rng(11)
    for _ in range(20):
        X = rng.normal(size=(rng.integers(1, 40), rng.integers(1, 4)))
        a = renyi2_entropy_estimate(X, 0.7, "bits", method="gram")
        b = renyi2_entropy_estimate(X, 0.7, "bits", method="embedding")
        assert abs(a - b) <= 1e-12


def test_renyi2_increases_when_points_spread():
    for base in ([0.0, 0.5, 1.0], [-1.0, 0.0, 2.0]):
        base = np.array(base)
        values = [renyi2_entropy_estimate(base * s, 0.5) for s in (1.0, 1.5, 2.0, 4.0)]
        assert all(a < b for a, b in zip(values, values[1:]))


# -- covariance operator and HS norm --------------------------------------------

def test_covariance_operator_examples():
    f = RkhsExpansion(G1, [[0.0], [1.0]], [1.0, -2.0])
    out = covariance_operator_apply([[0.3]], G1, f)
    assert np.all(out.coeffs == 0.0)
    const = RkhsExpansion(KernelSpec.linear(), [[0.0]], [0.0])
    out = covariance_operator_apply([[1.0], [2.0]], KernelSpec.linear(), const)
    assert np.all(out.coeffs == 0.0)
    with pytest.raises(InvalidInputError):
        covariance_operator_apply([[0.3]], KernelSpec.gaussian(2.0), f)


def test_covariance_operator_self_adjoint_witness():
    rng = np.random.default_rng(12)
    for _ in range(50):
        X = rng.normal(size=(25, 2))
        f, g = random_expansion(rng, G1), random_expansion(rng, G1)
        cf = covariance_operator_apply(X, G1, f)
        fx = np.array([f(x) for x in X])
        gx = np.array([g(x) for x in X])
        oracle = np.mean((fx - fx.mean()) * (gx - gx.mean()))
        assert rkhs_inner_product(g, cf) == pytest.approx(oracle, abs=1e-12)
        assert abs(cf.coeffs.sum()) <= 1e-14


def test_hs_norm_examples():
    assert hs_norm_empirical(G1, [[0.2, 0.1]]) == 1.0
    assert hs_norm_empirical(KernelSpec.linear(), np.eye(2)) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    X = np.random.default_rng(13).normal(size=(20, 3))
    for k in (G1, KernelSpec.polynomial(1.0, 2)):
        fro = np.linalg.norm(gram_matrix(k, X), "fro") / 20
        assert hs_norm_empirical(k, X) == pytest.approx(fro, rel=1e-12)
