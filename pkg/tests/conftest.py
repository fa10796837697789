"""Shared independent oracles for the test suite.

Everything here deliberately avoids the package's own series/determinant
machinery: scipy special functions, brute-force sums and plain formulas
only, so agreement is a real cross-check.
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import hyp1f1 as scipy_hyp1f1


def kappa_mu_shadowed_pdf(x, kappa: float, mu: float, m: float, gamma_bar: float):
    """SISO kappa-mu shadowed SNR density (scipy-based, log-assembled)."""
    x = np.asarray(x, dtype=float)
    ln_c = (mu * math.log(mu) + m * math.log(m) + mu * math.log1p(kappa)
            - math.lgamma(mu) - math.log(gamma_bar) - m * math.log(mu * kappa + m))
    ln = (ln_c + (mu - 1) * np.log(x / gamma_bar) - mu * (1 + kappa) * x / gamma_bar
          + np.log(scipy_hyp1f1(m, mu, mu ** 2 * kappa * (1 + kappa)
                                / (mu * kappa + m) * x / gamma_bar)))
    return np.exp(ln)


def kappa_mu_shadowed_mgf(s, kappa: float, mu: float, m: float, gamma_bar: float):
    """SISO kappa-mu shadowed MGF (valid for s below the existence boundary)."""
    s = np.asarray(s, dtype=float)
    a = mu * (1 + kappa)
    return (a ** mu * m ** m / (mu * kappa + m) ** m
            * (a - gamma_bar * s) ** (m - mu)
            * (m * a / (mu * kappa + m) - gamma_bar * s) ** (-m))


def central_wishart_logpdf(a: np.ndarray, p: int, cov: np.ndarray) -> float:
    """Log density of a complex central Wishart W_n(p, cov) at A."""
    n = a.shape[0]
    lg = 0.5 * n * (n - 1) * math.log(math.pi) + sum(
        math.lgamma(p - i) for i in range(n))
    _, ld_a = np.linalg.slogdet(a)
    _, ld_c = np.linalg.slogdet(cov)
    return float(-np.trace(np.linalg.solve(cov, a)).real
                 + (p - n) * ld_a - lg - p * ld_c)


def random_hermitian_pd(rng, n: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = g @ g.conj().T / n + 0.25 * np.eye(n)
    return scale * 0.5 * (a + a.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
