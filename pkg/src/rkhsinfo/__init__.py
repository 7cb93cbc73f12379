"""Kernel methods, RKHS embeddings and information-theoretic estimators."""

from .exceptions import DegenerateInputError, InvalidInputError, NumericalFailureError
from .info_discrete import (
    BITS,
    NATS,
    DiscretePmf,
    JointPmf,
    KNGenerator,
    LogBase,
    conditional_entropy,
    joint_entropy,
    kl_divergence,
    kn_mean,
    marginals,
    mutual_information,
    renyi_entropy,
    shannon_entropy,
    tsallis_entropy,
)
from .io import ingest_csv
from .kernels import KernelSpec, PsdReport, cross_gram, gram_matrix, kernel_eval, psd_check
from .l2_geometry import (
    LeastSquaresProjection,
    RegressionFit,
    central_moment,
    moment_tensor,
    ols_fit,
    standardized_moment,
)
from .prob_core import (
    GaussianParams,
    Standardizer,
    gaussian_log_likelihood,
    gaussian_mle_mean,
    sample_covariance,
    sample_mean,
    sample_variance,
    standardize,
)
from .rkhs import (
    BandwidthSpec,
    KernelMeanEmbedding,
    ParzenDensity,
    RkhsExpansion,
    covariance_operator_apply,
    expansion_eval,
    hs_norm_empirical,
    kde_density,
    mean_embedding,
    mmd_squared,
    renyi2_entropy_estimate,
    rkhs_inner_product,
    rkhs_norm,
)

__version__ = "0.1.0"
