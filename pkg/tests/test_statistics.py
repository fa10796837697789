import math

import numpy as np
import pytest
from scipy import integrate

from rician_shadowed import (ModelParams, NumericalConsistencyError,
                             ScaledIdentityParams, SisoKappaMuParams,
                             gamma_wishart_logpdf, joint_eigenvalue_logpdf,
                             map_siso, max_eig_cdf, max_eig_cdf_grid, max_eig_pdf,
                             max_eig_pdf_grid, mgf, reduction_params,
                             sample_gamma_variate, upsilon_entry, upsilon_matrix)
from rician_shadowed.stats import UpsilonMatrix
from tests.conftest import (central_wishart_logpdf, kappa_mu_shadowed_mgf,
                            kappa_mu_shadowed_pdf, random_hermitian_pd)

FIG1A = ScaledIdentityParams(n=2, p=4, m=2, sigma2_Sigma=1.0, sigma2_M=1.0 / 8)
FIG2 = ScaledIdentityParams(n=3, p=4, m=3, sigma2_Sigma=4.0, sigma2_M=1.0 / 8)

# 30-digit reference values for FIG1A / FIG2 (independent high-precision run)
FIG1A_CDF = {
    5.0: 0.00086379027231657740602,
    20.0: 0.20351096791493512316,
    30.0: 0.47863414213170215313,
    60.0: 0.9301767568839480468,
    120.0: 0.99964428340559009195,
}
FIG2_CDF = {
    30.0: 0.0050965013534818516756,
    80.0: 0.50944076365557198161,
    150.0: 0.97758316448307428405,
}


def _full_matrix_case():
    sigma = np.array([[1.0, 0.3 + 0.2j], [0.3 - 0.2j, 0.8]])
    m_mat = np.array([[2.0, -0.1j], [0.1j, 1.5]])
    return ModelParams(n=2, p=4, m=2.5, Sigma=sigma, M=m_mat)


def test_gamma_wishart_logpdf_reference():
    params = _full_matrix_case()
    a = np.array([[1.2, 0.1 + 0.05j], [0.1 - 0.05j, 0.9]])
    assert gamma_wishart_logpdf(a, params) == pytest.approx(
        -6.6053456333112361923, rel=1e-12)
    with pytest.raises(ValueError):
        gamma_wishart_logpdf(np.diag([1.0, -0.2]), params)


def test_gamma_wishart_siso_reduction():
    siso = SisoKappaMuParams(kappa=1.9, mu=3, m=2.2, gamma_bar=1.4)
    params = map_siso(siso).to_model_params()
    for g in np.linspace(0.05, 6.0, 15):
        mine = math.exp(gamma_wishart_logpdf(np.array([[g]]), params))
        oracle = float(kappa_mu_shadowed_pdf(g, siso.kappa, siso.mu, siso.m,
                                             siso.gamma_bar))
        assert mine == pytest.approx(oracle, rel=1e-9)


def test_gamma_wishart_mp_wishart_collapse(rng):
    # m = p: gamma-Wishart equals central Wishart with covariance Sigma + M^-1
    sp = ScaledIdentityParams(n=2, p=4, m=4.0, sigma2_Sigma=1.3, sigma2_M=0.6)
    params = sp.to_model_params()
    cov = params.Sigma + np.linalg.inv(params.M)
    for _ in range(5):
        a = random_hermitian_pd(rng, 2, scale=3.0)
        assert gamma_wishart_logpdf(a, params) == pytest.approx(
            central_wishart_logpdf(a, 4, cov), rel=1e-9)


def test_gamma_wishart_normalization_importance(rng):
    # E_q[f/q] = 1 under a central Wishart proposal with covariance Sigma + M^-1
    params = _full_matrix_case()
    cov = params.Sigma + np.linalg.inv(params.M)
    n_draws = 20_000
    draws = sample_gamma_variate(2, float(params.p), np.linalg.inv(cov), rng,
                                 size=n_draws)
    ratios = np.empty(n_draws)
    for i in range(n_draws):
        a = draws[i]
        ratios[i] = math.exp(gamma_wishart_logpdf(a, params)
                             - central_wishart_logpdf(a, params.p, cov))
    se = float(np.std(ratios, ddof=1) / math.sqrt(n_draws))
    assert abs(float(np.mean(ratios)) - 1.0) < 3 * se


def test_mgf_trivial_and_reference():
    params = _full_matrix_case()
    assert mgf(np.zeros((2, 2)), params) == 1.0
    assert mgf(-0.1 * np.eye(2), params) == pytest.approx(
        0.38812536278278172907, rel=1e-12)
    with pytest.raises(ValueError, match="positive definite"):
        mgf(2.0 * np.eye(2), params)


def test_mgf_siso_reduction():
    siso = SisoKappaMuParams(kappa=0.8, mu=2, m=3.1, gamma_bar=2.0)
    params = map_siso(siso).to_model_params()
    for s in (-2.0, -0.75, -0.2, 0.1):
        assert mgf(np.array([[s]]), params) == pytest.approx(
            float(kappa_mu_shadowed_mgf(s, siso.kappa, siso.mu, siso.m,
                                        siso.gamma_bar)), rel=1e-12)


def test_mgf_monte_carlo_agreement(rng):
    from rician_shadowed import estimate_mgf
    params = _full_matrix_case()
    s = -0.1 * np.eye(2)
    mean, se = estimate_mgf(params, s, 200_000, seed=5150)
    assert abs(mean - mgf(s, params)) < 3 * se


def test_mgf_mean_gram_gradient():
    # gradient of the MGF at S = 0 recovers E[Y] = p Sigma + m M^-1
    params = _full_matrix_case()
    target = params.mean_gram
    h = 1e-5
    # diagonal entries
    for i in range(2):
        e = np.zeros((2, 2), dtype=complex)
        e[i, i] = 1.0
        grad = (mgf(h * e, params) - mgf(-h * e, params)) / (2 * h)
        assert grad == pytest.approx(target[i, i].real, rel=1e-6)
    # off-diagonal: d/dh etr(Y h (E01 + E10)) = 2 Re Y_01
    e = np.zeros((2, 2), dtype=complex)
    e[0, 1] = e[1, 0] = 1.0
    grad = (mgf(h * e, params) - mgf(-h * e, params)) / (2 * h)
    assert grad == pytest.approx(2 * target[0, 1].real, rel=1e-6)
    e = np.zeros((2, 2), dtype=complex)
    e[0, 1] = 1j
    e[1, 0] = -1j
    grad = (mgf(h * e, params) - mgf(-h * e, params)) / (2 * h)
    assert grad == pytest.approx(-2 * target[0, 1].imag, rel=1e-6)


def test_joint_eigenvalue_n1_reduction():
    sp = map_siso(SisoKappaMuParams(kappa=1.0, mu=2, m=3.0, gamma_bar=1.0))
    for y in (0.2, 0.8, 2.5):
        assert joint_eigenvalue_logpdf([y], sp) == pytest.approx(
            gamma_wishart_logpdf(np.array([[y]]), sp.to_model_params()), abs=1e-12)


def test_joint_eigenvalue_reference_values():
    assert math.exp(joint_eigenvalue_logpdf([3.0, 10.0], FIG1A)) == pytest.approx(
        0.0018799059262885765449, rel=1e-11)
    assert math.exp(joint_eigenvalue_logpdf([8.0, 25.0], FIG1A)) == pytest.approx(
        0.0017866743090398545125, rel=1e-11)


def test_joint_eigenvalue_domain_errors():
    with pytest.raises(ValueError):
        joint_eigenvalue_logpdf([3.0, 1.0], FIG1A)
    with pytest.raises(ValueError):
        joint_eigenvalue_logpdf([-1.0, 2.0], FIG1A)
    with pytest.raises(ValueError):
        joint_eigenvalue_logpdf([1.0], FIG1A)


def test_joint_eigenvalue_normalization_n2():
    # tensor Gauss-Legendre panels over the wedge 0 < phi1 < phi2 < 220
    # (the remaining tail mass is < 1e-7); nodes are interior so the
    # ordered-distinct precondition holds automatically
    nodes, weights = np.polynomial.legendre.leggauss(16)
    panel = 20.0

    def panels(lo, hi):
        edges = np.linspace(lo, hi, max(1, int(math.ceil((hi - lo) / panel))) + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            half = 0.5 * (b - a)
            yield a + half * (nodes + 1.0), weights * half

    total = 0.0
    for v_pts, v_w in panels(0.0, 220.0):
        for v, wv in zip(v_pts, v_w):
            inner = 0.0
            for u_pts, u_w in panels(0.0, v):
                for u, wu in zip(u_pts, u_w):
                    inner += wu * math.exp(joint_eigenvalue_logpdf([u, v], FIG1A))
            total += wv * inner
    assert abs(total - 1.0) <= 1e-4


def test_joint_eigenvalue_histogram_n2(rng):
    # coarse 10x10 grid over sorted eigenvalue pairs, 3 sigma per bin
    from rician_shadowed import gram, sample_channel
    n_draws = 100_000
    y = gram(sample_channel(FIG1A.to_model_params(), rng, size=n_draws))
    ev = np.sort(np.linalg.eigvalsh(y), axis=1)
    lo1, hi1 = 0.0, np.quantile(ev[:, 0], 0.999)
    lo2, hi2 = 0.0, np.quantile(ev[:, 1], 0.999)
    counts, e1, e2 = np.histogram2d(ev[:, 0], ev[:, 1],
                                    bins=[np.linspace(lo1, hi1, 11),
                                          np.linspace(lo2, hi2, 11)])
    glq = np.polynomial.legendre.leggauss(6)
    checked = 0
    for i in range(10):
        for j in range(10):
            # only bins fully inside the wedge phi1 < phi2
            if e1[i + 1] >= e2[j]:
                continue
            w1, w2 = e1[i + 1] - e1[i], e2[j + 1] - e2[j]
            t1 = 0.5 * (e1[i] + e1[i + 1]) + 0.5 * w1 * glq[0]
            t2 = 0.5 * (e2[j] + e2[j + 1]) + 0.5 * w2 * glq[0]
            mass = 0.0
            for a, wa in zip(t1, glq[1]):
                for b, wb in zip(t2, glq[1]):
                    mass += wa * wb * math.exp(joint_eigenvalue_logpdf([a, b], FIG1A))
            mass *= 0.25 * w1 * w2
            se = math.sqrt(max(mass * (1 - mass), 1e-12) / n_draws)
            assert abs(counts[i, j] / n_draws - mass) < max(3 * se, 2e-4)
            checked += 1
    assert checked >= 20


def test_upsilon_entry_zero_and_methods():
    for method in ("closed_form", "quadrature"):
        assert upsilon_entry(1, 1, 0.0, FIG1A, method=method) == 0.0
    u = upsilon_matrix(0.0, FIG1A)
    assert isinstance(u, UpsilonMatrix)
    assert np.all(u.values() == 0.0)
    with pytest.raises(ValueError):
        upsilon_entry(0, 1, 1.0, FIG1A)
    with pytest.raises(ValueError):
        upsilon_entry(1, 1, -1.0, FIG1A)
    mp_params = ScaledIdentityParams(n=2, p=4, m=5.0, sigma2_Sigma=1.0, sigma2_M=0.5)
    with pytest.raises(ValueError, match="m < p"):
        upsilon_entry(1, 1, 1.0, mp_params, method="closed_form")


def test_upsilon_closed_vs_quadrature_fig1():
    for x in (1.0, 10.0, 50.0, 150.0):
        for i in (1, 2):
            for j in (1, 2):
                c = upsilon_entry(i, j, x, FIG1A, method="closed_form")
                q = upsilon_entry(i, j, x, FIG1A, method="quadrature")
                assert c == pytest.approx(q, rel=1e-8)


def test_upsilon_large_x_pure_2f1_limit():
    # at x = 1e4 the exponential kills the Phi1 sum; both methods converge
    for i in (1, 2):
        for j in (1, 2):
            c = upsilon_entry(i, j, 1e4, FIG1A, method="closed_form")
            q = upsilon_entry(i, j, 1e4, FIG1A, method="quadrature")
            assert c == pytest.approx(q, rel=1e-8)


def test_max_eig_cdf_reference_values():
    for x, v in FIG1A_CDF.items():
        assert max_eig_cdf(x, FIG1A) == pytest.approx(v, rel=1e-7)
        assert max_eig_cdf(x, FIG1A, method="quadrature") == pytest.approx(v, rel=1e-10)
    for x, v in FIG2_CDF.items():
        assert max_eig_cdf(x, FIG2) == pytest.approx(v, rel=1e-7)


def test_max_eig_cdf_bounds_and_monotonicity():
    assert max_eig_cdf(0.0, FIG1A) == 0.0
    assert max_eig_cdf(1e6, FIG1A) == pytest.approx(1.0, abs=1e-6)
    params_list = [FIG1A, FIG2,
                   ScaledIdentityParams(n=2, p=4, m=6.0, sigma2_Sigma=1.0, sigma2_M=0.5),
                   ScaledIdentityParams(n=2, p=4, m=4.0, sigma2_Sigma=1.0, sigma2_M=0.5)]
    for params in params_list:
        xs = np.linspace(0.0, 250.0, 200)
        cg = max_eig_cdf_grid(xs, params)
        assert np.all(np.diff(cg) >= -1e-12)
        assert cg[0] == 0.0
        assert cg[-1] <= 1.0
    with pytest.raises(ValueError):
        max_eig_cdf(-1.0, FIG1A)


def test_max_eig_pdf_reference_and_fd():
    # high-precision reference at x=20 for FIG1A
    assert max_eig_pdf(20.0, FIG1A) == pytest.approx(0.025874970577637, rel=1e-9)
    # derivative cross-check (both parameter sets, three abscissae)
    for params in (FIG1A, FIG2):
        for x in (20.0, 60.0, 120.0):
            h = max(1e-5 * x, 1e-7)
            fd = (max_eig_cdf(x + h, params) - max_eig_cdf(x - h, params)) / (2 * h)
            assert max_eig_pdf(x, params) == pytest.approx(fd, rel=1e-6)
    with pytest.raises(ValueError):
        max_eig_pdf(0.0, FIG1A)


def test_max_eig_pdf_normalization_quick():
    xs = np.linspace(1e-6, 400.0, 1500)
    pdf = max_eig_pdf_grid(xs, FIG2)
    assert np.all(pdf >= 0.0)
    total = np.trapezoid(pdf, xs)
    assert total == pytest.approx(1.0, abs=1e-3)


def test_max_eig_pdf_deep_tail_fallback():
    # far lower tail: kernel matrix numerically singular, finite-difference
    # fallback must return ~0 without raising
    v = max_eig_pdf(1e-4, FIG1A)
    assert 0.0 <= v < 1e-12


def test_max_eig_grid_quadrature_m_ge_p(rng):
    # m >= p auto-selects the integral form; spot-check monotone CDF and
    # pdf consistency with finite differences
    params = ScaledIdentityParams(n=2, p=4, m=7.5, sigma2_Sigma=1.0, sigma2_M=0.3)
    xs = np.linspace(0.0, 150.0, 120)
    cg = max_eig_cdf_grid(xs, params)
    assert np.all(np.diff(cg) >= -1e-12)
    for x in (30.0, 60.0):
        h = 1e-4 * x
        fd = (max_eig_cdf(x + h, params) - max_eig_cdf(x - h, params)) / (2 * h)
        assert max_eig_pdf(x, params) == pytest.approx(fd, rel=1e-6)


def test_reduction_params_examples():
    law = reduction_params("rayleigh_limit",
                           ScaledIdentityParams(n=2, p=4, m=2.0,
                                                sigma2_Sigma=1.0, sigma2_M=1e-2))
    assert np.allclose(law.covariance, np.eye(2))
    assert law.noncentrality is None and law.dof == 4
    assert np.allclose(law.approx.M, 1e-2 * np.eye(2) * 1.0)

    sp = ScaledIdentityParams(n=2, p=4, m=4.0, sigma2_Sigma=1.0, sigma2_M=0.5)
    law = reduction_params("rayleigh_mp", sp)
    assert np.allclose(law.covariance, 3.0 * np.eye(2))  # Sigma + M^-1 = (1+2) I
    assert law.approx.m == 4.0

    base = ScaledIdentityParams(n=2, p=4, m=2.0, sigma2_Sigma=1.0, sigma2_M=2.0 / 40.0)
    law = reduction_params("rician_limit", base, limit_scale=50.0)
    assert np.allclose(law.los_gram_mean, 40.0 * np.eye(2))
    assert np.allclose(law.noncentrality, 40.0 * np.eye(2))
    assert law.approx.m == 100.0
    # preserved product m M^-1 under the approximating ladder
    assert np.allclose(law.approx.m * np.linalg.inv(law.approx.M), 40.0 * np.eye(2))
    with pytest.raises(ValueError):
        reduction_params("bogus", base)
