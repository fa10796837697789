"""Exact samplers for the channel, its Gram matrix and the LOS gamma factor.

All samplers accept an optional leading batch dimension (``size``) and are
vectorized over it; they are reentrant given independent Generator streams.
"""
from __future__ import annotations

import numpy as np
from numpy.random import Generator

from .model import ModelParams

_CLAMP_TOL = 1e-12


def standard_complex_normal(rng: Generator, shape) -> np.ndarray:
    """CN(0, 1) entries: unit total variance, split across re/im."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def hermitian_sqrt(a: np.ndarray) -> np.ndarray:
    """Hermitian square root via eigendecomposition, clamping round-off
    negative eigenvalues at zero (tolerance 1e-12 * max |eigenvalue|)."""
    w, v = np.linalg.eigh(a)
    lim = -_CLAMP_TOL * np.max(np.abs(w), axis=-1, keepdims=True)
    if np.any(w < lim):
        raise ValueError("matrix is not positive semidefinite")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)


def sample_scattering(params: ModelParams, rng: Generator, size: int | None = None) -> np.ndarray:
    """Scattered component: p x n with i.i.d. CN(0, Sigma) rows."""
    shape = (params.p, params.n) if size is None else (size, params.p, params.n)
    g = standard_complex_normal(rng, shape)
    return g @ hermitian_sqrt(params.Sigma)


def sample_gamma_variate(n: int, beta: float, omega: np.ndarray, rng: Generator,
                         size: int | None = None) -> np.ndarray:
    """Draw B ~ Gamma_n(beta, Omega) (mean beta * Omega^{-1}) by the complex
    Bartlett construction; supports non-integer beta > n - 1."""
    if not beta > n - 1:
        raise ValueError(f"gamma-variate sampling requires beta > n - 1, got beta={beta}")
    omega = np.asarray(omega, dtype=complex)
    nb = 1 if size is None else size
    lower = np.tril(standard_complex_normal(rng, (nb, n, n)), k=-1)
    diag_sq = np.empty((nb, n))
    for i in range(n):
        diag_sq[:, i] = rng.gamma(shape=beta - i, scale=1.0, size=nb)
    idx = np.arange(n)
    lower[:, idx, idx] = np.sqrt(diag_sq)
    c = hermitian_sqrt(np.linalg.inv(omega))
    w = c @ lower
    b = w @ np.swapaxes(w.conj(), -1, -2)
    b = 0.5 * (b + np.swapaxes(b.conj(), -1, -2))
    return b[0] if size is None else b


def sample_channel(params: ModelParams, rng: Generator, size: int | None = None) -> np.ndarray:
    """Full channel H = Hhat + Xi, with the LOS factor embedded as
    Xi = [B^{1/2}; 0] for B ~ Gamma_n(m, M).

    Any realization of Xi with the correct Gram law is equivalent in law
    for Y = H^H H, by left-unitary invariance of Hhat; this embedding is
    the tested canonical choice.
    """
    hhat = sample_scattering(params, rng, size=size)
    b = sample_gamma_variate(params.n, params.m, params.M, rng, size=size)
    h = hhat.copy()
    h[..., : params.n, :] += hermitian_sqrt(b)
    return h


def gram(h: np.ndarray) -> np.ndarray:
    """Gram matrix Y = H^H H, symmetrized against round-off."""
    y = np.swapaxes(np.asarray(h).conj(), -1, -2) @ h
    return 0.5 * (y + np.swapaxes(y.conj(), -1, -2))


def max_eigenvalue(y: np.ndarray) -> float | np.ndarray:
    """Largest eigenvalue of a Hermitian matrix (batched)."""
    y = np.asarray(y)
    if not np.all(np.isfinite(y.view(float) if np.iscomplexobj(y) else y)):
        raise ValueError("non-finite entries in eigenvalue input")
    w = np.linalg.eigvalsh(y)[..., -1]
    return float(w) if w.ndim == 0 else w


def sample_max_eigenvalues(params: ModelParams, count: int, rng: Generator) -> np.ndarray:
    """count i.i.d. draws of the largest Gram eigenvalue."""
    return max_eigenvalue(gram(sample_channel(params, rng, size=count)))


def sample_wishart_max_eigenvalues(p: int, sigma: np.ndarray, count: int, rng: Generator,
                                   los_gram_mean: np.ndarray | None = None) -> np.ndarray:
    """Largest-eigenvalue draws from a (non)central Wishart Gram matrix.

    H has i.i.d. CN(0, sigma) rows plus, when los_gram_mean Q is given, a
    fixed LOS term [Q^{1/2}; 0]; this is the oracle for the Rayleigh and
    Rician limiting laws.
    """
    sigma = np.asarray(sigma, dtype=complex)
    n = sigma.shape[0]
    h = standard_complex_normal(rng, (count, p, n)) @ hermitian_sqrt(sigma)
    if los_gram_mean is not None:
        h[:, :n, :] += hermitian_sqrt(np.asarray(los_gram_mean, dtype=complex))
    return max_eigenvalue(gram(h))
