"""Exact statistics and Monte-Carlo validation for the shadowed-Rician
MIMO Gram-matrix fading model.

The channel is H = Hhat + Xi with Gaussian scattering Hhat and a LOS term
whose Gram matrix follows a matrix gamma law; the package provides exact
samplers, the Gram-matrix log-pdf and MGF, the joint eigenvalue density,
closed-form maximum-eigenvalue CDF/PDF (scaled-identity shadowing), the
model's Rayleigh/Rician/SISO reductions, and a Monte-Carlo harness that
cross-validates every closed form.
"""
from .errors import (DegenerateSpectrumError, NonConvergenceError,
                     NumericalConsistencyError)
from .matrixhyp import (EigenSpectrum, complex_pochhammer, complex_pochhammer_ln,
                        count_standard_tableaux, hyp_1f1_matrix_detratio,
                        hyp_1f1_matrix_detratio_ln, hyp_matrix, hyp_matrix_ln,
                        schur_polynomial, zonal_polynomial)
from .model import ModelParams, ScaledIdentityParams, SisoKappaMuParams, map_siso
from .montecarlo import (EmpiricalDistribution, HistogramEstimate, empirical_cdf,
                         estimate_max_eig_samples, estimate_mgf, ks_statistic,
                         ks_two_sample)
from .partitions import Partition, enumerate_partitions
from .sampling import (gram, hermitian_sqrt, max_eigenvalue, sample_channel,
                       sample_gamma_variate, sample_max_eigenvalues,
                       sample_scattering, sample_wishart_max_eigenvalues)
from .scalar import (gauss_2f1, humbert_phi1, kummer_1f1, log_gamma,
                     log_multivariate_gamma, pochhammer)
from .series import DEFAULT_POLICY, MATRIX_POLICY, SeriesPolicy
from .stats import (LimitLaw, UpsilonMatrix, gamma_wishart_logpdf,
                    joint_eigenvalue_logpdf, max_eig_cdf, max_eig_cdf_grid,
                    max_eig_pdf, max_eig_pdf_grid, mgf, reduction_params,
                    upsilon_entry, upsilon_matrix)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY",
    "MATRIX_POLICY",
    "DegenerateSpectrumError",
    "EigenSpectrum",
    "EmpiricalDistribution",
    "HistogramEstimate",
    "LimitLaw",
    "ModelParams",
    "NonConvergenceError",
    "NumericalConsistencyError",
    "Partition",
    "ScaledIdentityParams",
    "SeriesPolicy",
    "SisoKappaMuParams",
    "UpsilonMatrix",
    "complex_pochhammer",
    "complex_pochhammer_ln",
    "count_standard_tableaux",
    "empirical_cdf",
    "enumerate_partitions",
    "estimate_max_eig_samples",
    "estimate_mgf",
    "gamma_wishart_logpdf",
    "gauss_2f1",
    "gram",
    "hermitian_sqrt",
    "humbert_phi1",
    "hyp_1f1_matrix_detratio",
    "hyp_1f1_matrix_detratio_ln",
    "hyp_matrix",
    "hyp_matrix_ln",
    "joint_eigenvalue_logpdf",
    "ks_statistic",
    "ks_two_sample",
    "kummer_1f1",
    "log_gamma",
    "log_multivariate_gamma",
    "map_siso",
    "max_eig_cdf",
    "max_eig_cdf_grid",
    "max_eig_pdf",
    "max_eig_pdf_grid",
    "max_eigenvalue",
    "mgf",
    "pochhammer",
    "reduction_params",
    "sample_channel",
    "sample_gamma_variate",
    "sample_max_eigenvalues",
    "sample_scattering",
    "sample_wishart_max_eigenvalues",
    "schur_polynomial",
    "upsilon_entry",
    "upsilon_matrix",
    "zonal_polynomial",
]
