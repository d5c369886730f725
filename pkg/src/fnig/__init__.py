"""Fractional normal inverse Gaussian (FNIG) process.

X(t) = B_H(G(t)): fractional Brownian motion time-changed by an inverse
Gaussian subordinator. The package provides closed-form and quadrature
analytics (densities, moments, covariances, noise autocovariance and its
long-range asymptote, n-th order extension), an exact-in-law path simulator,
and a Monte Carlo harness that cross-checks the two.
"""

import sys

__version__ = "0.1.0"

from .errors import DomainError, FactorizationError, QuadratureError  # noqa: E402
from .params import FnigParams, IgParams, FbmParams, NFbmParams, NFnigParams, NoiseParams  # noqa: E402
from .special import bessel_k, bessel_k_scaled, bessel_k_asymptotic, log_gamma  # noqa: E402
from .ig import (  # noqa: E402
    SubordinatorPath,
    ig_density,
    ig_moment,
    ig_sample,
    laplace_exponent,
    subordinator_path,
)
from .fbm import c_coeff, fbm_cov, nfbm_cov, nfbm_var, nfgn_cov  # noqa: E402
from .simulate import (  # noqa: E402
    CholFactor,
    GramMatrix,
    SamplePath,
    cholesky_psd,
    gaussian_given_gram,
    gram_matrix,
    sample_marginal,
    simulate_fnig_path,
    uniform_grid,
)
from .analytics import (  # noqa: E402
    abs_moment,
    cauchy_density,
    cov_ratio,
    fnig_cdf,
    fnig_cov,
    fnig_density,
    kurtosis,
    nig_density_closed,
)
from .noise import (  # noqa: E402
    SeriesSample,
    lamperti_cov,
    lrd_asymptote,
    noise_acf,
    noise_cov,
    sign_acf_estimate,
)
from .nfnig import ig_cross_moment, nfnig_cov, nfnign_cov  # noqa: E402
from .validate import McConfig, ValidationReport, build_report  # noqa: E402

__all__ = ["__version__"] + [
    name for name, obj in list(globals().items()) if not name.startswith("_") and not isinstance(obj, type(sys))
]
