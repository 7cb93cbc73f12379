"""The estimator classes follow the scikit-learn contract."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from rkhsinfo import (
    DegenerateInputError,
    KernelMeanEmbedding,
    KernelSpec,
    LeastSquaresProjection,
    ParzenDensity,
    Standardizer,
    kde_density,
    mean_embedding,
    mmd_squared,
    ols_fit,
    renyi2_entropy_estimate,
    rkhs_norm,
    standardize,
)


@pytest.fixture
def data():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    y = X @ [1.0, 0.5, -2.0] + 0.1 * rng.normal(size=40)
    return X, y


def test_get_set_params_and_clone():
    kde = ParzenDensity(bandwidth="silverman")
    assert kde.get_params() == {"bandwidth": "silverman"}
    assert clone(kde.set_params(bandwidth=0.3)).bandwidth == 0.3
    emb = KernelMeanEmbedding(kernel="laplacian", sigma=2.0)
    assert emb.get_params()["sigma"] == 2.0
    assert clone(emb).get_params() == emb.get_params()


def test_unfitted_raises():
    for est, call in ((Standardizer(), "transform"), (ParzenDensity(), "density"),
                      (KernelMeanEmbedding(), "transform"), (LeastSquaresProjection(), "predict")):
        with pytest.raises(NotFittedError):
            getattr(est, call)(np.zeros((2, 1)))


def test_standardizer(data):
    X, _ = data
    Z = Standardizer().fit_transform(X)
    np.testing.assert_allclose(Z[:, 0], standardize(X[:, 0]), rtol=1e-14)
    sc = Standardizer().fit(X)
    np.testing.assert_allclose(sc.inverse_transform(sc.transform(X)), X, rtol=1e-13)
    assert list(sc.get_feature_names_out()) == ["x0", "x1", "x2"]
    with pytest.raises(DegenerateInputError):
        Standardizer().fit(np.ones((4, 2)))


def test_least_squares_projection(data):
    X, y = data
    reg = LeastSquaresProjection().fit(X, y)
    fit = ols_fit(X, y)
    np.testing.assert_array_equal(reg.coef_, fit.betas)
    np.testing.assert_allclose(reg.predict(X), fit.fitted, rtol=1e-13)
    assert reg.score(X, y) > 0.99


def test_pipeline(data):
    X, y = data
    pipe = make_pipeline(Standardizer(), LeastSquaresProjection()).fit(X, y)
    np.testing.assert_allclose(pipe.predict(X), ols_fit(X, y).fitted, rtol=1e-10)


def test_parzen_density(data):
    X, _ = data
    x = X[:, :1]
    kde = ParzenDensity(bandwidth=0.4).fit(x)
    q = np.array([[0.0], [1.0]])
    np.testing.assert_allclose(kde.density(q), kde_density(x, 0.4, q), rtol=1e-15)
    np.testing.assert_allclose(kde.score_samples(q), np.log(kde.density(q)))
    assert kde.renyi2_entropy() == renyi2_entropy_estimate(x, 0.4)
    assert ParzenDensity("silverman").fit(x).bandwidth_ > 0


def test_kernel_mean_embedding(data):
    X, _ = data
    emb = KernelMeanEmbedding(sigma=0.7).fit(X)
    k = KernelSpec.gaussian(0.7)
    assert emb.norm() == rkhs_norm(mean_embedding(X, k))
    assert emb.transform(X[:3]).shape == (3, 1)
    Y = X + 0.5
    assert emb.mmd_squared(Y) == mmd_squared(X, Y, k)
