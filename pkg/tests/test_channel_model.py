import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from rician_shadowed import (ModelParams, ScaledIdentityParams, SisoKappaMuParams,
                             gram, hermitian_sqrt, map_siso, max_eigenvalue,
                             sample_channel, sample_gamma_variate,
                             sample_max_eigenvalues, sample_scattering)
from rician_shadowed.sampling import standard_complex_normal
from tests.conftest import random_hermitian_pd


def test_model_params_validation(rng):
    sig = random_hermitian_pd(rng, 2)
    mm = random_hermitian_pd(rng, 2)
    with pytest.raises(ValueError, match="p >= n"):
        ModelParams(n=2, p=1, m=2.0, Sigma=sig, M=mm)
    with pytest.raises(ValueError, match="m > n - 1"):
        ModelParams(n=2, p=4, m=1.0, Sigma=sig, M=mm)
    bad = sig.copy()
    bad[0, 1] = 5.0  # not Hermitian
    with pytest.raises(ValueError, match="Hermitian"):
        ModelParams(n=2, p=4, m=2.0, Sigma=bad, M=mm)
    with pytest.raises(ValueError, match="positive definite"):
        ModelParams(n=2, p=4, m=2.0, Sigma=-sig, M=mm)


def test_scaled_identity_round_trip():
    sp = ScaledIdentityParams(n=3, p=5, m=2.5, sigma2_Sigma=1.7, sigma2_M=0.3)
    assert sp.tau == 8
    mp = sp.to_model_params()
    assert np.array_equal(mp.Sigma, 1.7 * np.eye(3))
    assert np.array_equal(mp.M, 0.3 * np.eye(3))
    with pytest.raises(ValueError):
        ScaledIdentityParams(n=2, p=4, m=2.0, sigma2_Sigma=0.0, sigma2_M=1.0)


def test_map_siso_example():
    siso = SisoKappaMuParams(kappa=1.0, mu=2, m=3.0, gamma_bar=1.0)
    sp = map_siso(siso)
    assert sp.n == 1 and sp.p == 2 and sp.m == 3.0
    assert 1.0 / sp.sigma2_Sigma == pytest.approx(4.0, rel=1e-15)
    assert sp.sigma2_M == pytest.approx(6.0, rel=1e-15)
    # round trip kappa = m sigma_M^-2 / (mu sigma_Sigma^2)
    kappa_back = sp.m / sp.sigma2_M / (sp.p * sp.sigma2_Sigma)
    assert kappa_back == pytest.approx(1.0, rel=1e-14)
    # mean SNR identity: E[y] = p s2S + m / s2M = gamma_bar
    assert sp.p * sp.sigma2_Sigma + sp.m / sp.sigma2_M == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(ValueError, match="positive integer"):
        SisoKappaMuParams(kappa=1.0, mu=2.5, m=3.0, gamma_bar=1.0)


def test_map_siso_mean_snr_monte_carlo(rng):
    siso = SisoKappaMuParams(kappa=2.3, mu=3, m=1.7, gamma_bar=2.2)
    sp = map_siso(siso)
    n_draws = 100_000
    y = sample_max_eigenvalues(sp.to_model_params(), n_draws, rng)  # n=1: y itself
    se = float(np.std(y) / math.sqrt(n_draws))
    assert abs(float(np.mean(y)) - siso.gamma_bar) < 3 * se


def test_sample_scattering_moments(rng):
    # entry variance 1 for Sigma = I (0.5 per real part)
    params = ModelParams(n=2, p=3, m=2.0, Sigma=np.eye(2), M=np.eye(2))
    h = sample_scattering(params, rng, size=100_000)
    var = np.var(h.real) + np.var(h.imag)
    assert var == pytest.approx(1.0, abs=0.02)
    # Wishart mean identity: E[Hhat^H Hhat] = p Sigma
    sig = random_hermitian_pd(rng, 2)
    params = ModelParams(n=2, p=4, m=2.0, Sigma=sig, M=np.eye(2))
    h = sample_scattering(params, rng, size=100_000)
    emp = np.mean(np.swapaxes(h.conj(), -1, -2) @ h, axis=0)
    se = 4 * float(np.max(np.abs(sig))) / math.sqrt(100_000)
    assert np.max(np.abs(emp - 4 * sig)) < 3 * se * 3


def test_sample_scattering_exponential_row_power(rng):
    # n=1: |h|^2 per row is exponential with mean sigma^2
    s2 = 1.7
    params = ModelParams(n=1, p=2, m=1.0, Sigma=np.array([[s2]]), M=np.eye(1))
    h = sample_scattering(params, rng, size=50_000)
    power = np.abs(h[:, 0, 0]) ** 2
    d = scipy_stats.kstest(power, "expon", args=(0, s2))
    assert d.statistic < 0.01


def test_sample_gamma_variate_mean_and_pd(rng):
    omega = random_hermitian_pd(rng, 3)
    beta = 3.4
    b = sample_gamma_variate(3, beta, omega, rng, size=100_000)
    emp = np.mean(b, axis=0)
    target = beta * np.linalg.inv(omega)
    se = float(np.max(np.abs(target))) / math.sqrt(100_000)
    assert np.max(np.abs(emp - target)) < 9 * se
    # every draw Hermitian positive definite
    sub = b[:200]
    assert np.allclose(sub, np.swapaxes(sub.conj(), -1, -2))
    assert np.all(np.linalg.eigvalsh(sub)[:, 0] > 0)


def test_sample_gamma_variate_scalar_ks(rng):
    # n=1, Omega = omega: scalar Gamma(beta, scale 1/omega)
    beta, omega = 2.6, 1.8
    b = sample_gamma_variate(1, beta, np.array([[omega]]), rng, size=100_000)
    d = scipy_stats.kstest(b[:, 0, 0].real, "gamma", args=(beta, 0, 1.0 / omega))
    assert d.statistic < 0.01


def test_sample_gamma_variate_domain():
    with pytest.raises(ValueError, match="beta > n - 1"):
        sample_gamma_variate(3, 1.9, np.eye(3), np.random.default_rng(0))


def test_sample_channel_mean(rng):
    sig = random_hermitian_pd(rng, 2)
    mm = random_hermitian_pd(rng, 2)
    params = ModelParams(n=2, p=4, m=2.5, Sigma=sig, M=mm)
    y = gram(sample_channel(params, rng, size=100_000))
    emp = np.mean(y, axis=0)
    target = params.mean_gram
    se = float(np.max(np.abs(target))) / math.sqrt(100_000)
    assert np.max(np.abs(emp - target)) < 12 * se


def test_gram_examples(rng):
    assert np.array_equal(gram(np.zeros((3, 2))), np.zeros((2, 2)))
    assert np.allclose(gram(np.eye(3)), np.eye(3))
    h = standard_complex_normal(rng, (5, 3))
    ev = np.linalg.eigvalsh(gram(h))
    sv = np.linalg.svd(h, compute_uv=False)
    assert np.allclose(np.sort(ev), np.sort(sv ** 2), atol=1e-10)


def test_max_eigenvalue_examples(rng):
    assert max_eigenvalue(np.eye(4)) == pytest.approx(1.0)
    assert max_eigenvalue(np.diag([1.0, 2.0, 5.0])) == pytest.approx(5.0)
    y = gram(standard_complex_normal(rng, (4, 3)))
    assert max_eigenvalue(y) >= np.trace(y).real / 3 - 1e-12
    with pytest.raises(ValueError, match="finite"):
        max_eigenvalue(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_gram_psd_invariant(rng):
    params = ModelParams(n=3, p=4, m=2.5,
                         Sigma=random_hermitian_pd(rng, 3),
                         M=random_hermitian_pd(rng, 3))
    y = gram(sample_channel(params, rng, size=2000))
    w = np.linalg.eigvalsh(y)
    assert np.all(w[:, 0] >= -1e-10 * w[:, -1])


def test_left_unitary_invariance(rng):
    # gram(U H) and gram(H) identically distributed
    from rician_shadowed.montecarlo import EmpiricalDistribution, ks_two_sample
    sig = random_hermitian_pd(rng, 2)
    mm = random_hermitian_pd(rng, 2)
    params = ModelParams(n=2, p=4, m=2.5, Sigma=sig, M=mm)
    h = sample_channel(params, rng, size=10_000)
    g = standard_complex_normal(rng, (10_000, 4, 4))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r, axis1=-2, axis2=-1)
             / np.abs(np.diagonal(r, axis1=-2, axis2=-1)))[:, None, :]
    base = max_eigenvalue(gram(h))
    rotated = max_eigenvalue(gram(q @ h))
    d = ks_two_sample(EmpiricalDistribution.from_samples(base),
                      EmpiricalDistribution.from_samples(rotated))
    assert d < 0.015


def test_hermitian_sqrt_clamps_roundoff(rng):
    a = random_hermitian_pd(rng, 3)
    r = hermitian_sqrt(a)
    assert np.allclose(r @ r, a, atol=1e-12)
    # tiny negative eigenvalue from round-off is absorbed
    w, v = np.linalg.eigh(a)
    w[0] = -1e-15 * w[-1]
    a2 = (v * w) @ v.conj().T
    hermitian_sqrt(0.5 * (a2 + a2.conj().T))
    with pytest.raises(ValueError):
        hermitian_sqrt(np.diag([1.0, -0.5]))
