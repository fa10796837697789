"""Parameter containers for the shadowed-Rician MIMO Gram-matrix model.

The channel is H = Hhat + Xi with Hhat ~ CN(0, I_p (x) Sigma) and
Xi^H Xi ~ Gamma_n(m, M); Sigma is the receive-side scattering covariance
(power units) and M the shadowing rate matrix (inverse power), so the LOS
Gram mean is m M^{-1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_HERM_TOL = 1e-10


def _as_hermitian_pd(name: str, mat, n: int) -> np.ndarray:
    a = np.asarray(mat, dtype=complex)
    if a.shape != (n, n):
        raise ValueError(f"{name} must be {n}x{n}, got shape {a.shape}")
    scale = max(float(np.max(np.abs(a))), 1e-300)
    if np.max(np.abs(a - a.conj().T)) > _HERM_TOL * scale:
        raise ValueError(f"{name} must be Hermitian")
    a = 0.5 * (a + a.conj().T)
    if float(np.linalg.eigvalsh(a)[0]) <= 0.0:
        raise ValueError(f"{name} must be positive definite (min eigenvalue > 0)")
    return a


@dataclass(frozen=True)
class ModelParams:
    """Full-matrix model parameters (n, p, m, Sigma, M)."""

    n: int
    p: int
    m: float
    Sigma: np.ndarray
    M: np.ndarray

    def __post_init__(self) -> None:
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError("n must be a positive integer")
        if not (isinstance(self.p, (int, np.integer)) and self.p >= 1):
            raise ValueError("p must be a positive integer")
        if self.p < self.n:
            raise ValueError("p >= n is required")
        if not (math.isfinite(self.m) and self.m > self.n - 1):
            raise ValueError(f"shadowing severity must satisfy m > n - 1, got m={self.m}")
        object.__setattr__(self, "Sigma", _as_hermitian_pd("Sigma", self.Sigma, self.n))
        object.__setattr__(self, "M", _as_hermitian_pd("M", self.M, self.n))

    @property
    def mean_gram(self) -> np.ndarray:
        """E[Y] = p Sigma + m M^{-1}."""
        return self.p * self.Sigma + self.m * np.linalg.inv(self.M)


@dataclass(frozen=True)
class ScaledIdentityParams:
    """Scaled-identity specialization Sigma = sigma2_Sigma I, M = sigma2_M I,
    the regime in which the eigenvalue closed forms hold."""

    n: int
    p: int
    m: float
    sigma2_Sigma: float
    sigma2_M: float

    def __post_init__(self) -> None:
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError("n must be a positive integer")
        if not (isinstance(self.p, (int, np.integer)) and self.p >= 1):
            raise ValueError("p must be a positive integer")
        if self.p < self.n:
            raise ValueError("p >= n is required")
        if not (math.isfinite(self.m) and self.m > self.n - 1):
            raise ValueError(f"shadowing severity must satisfy m > n - 1, got m={self.m}")
        if not self.sigma2_Sigma > 0:
            raise ValueError("sigma2_Sigma > 0 required")
        if not self.sigma2_M > 0:
            raise ValueError("sigma2_M > 0 required")

    @property
    def tau(self) -> int:
        return self.p + self.n

    def to_model_params(self) -> ModelParams:
        eye = np.eye(self.n, dtype=complex)
        return ModelParams(self.n, self.p, self.m,
                           self.sigma2_Sigma * eye, self.sigma2_M * eye)


@dataclass(frozen=True)
class SisoKappaMuParams:
    """SISO kappa-mu shadowed fading parameters (kappa, mu, m, mean SNR)."""

    kappa: float
    mu: int
    m: float
    gamma_bar: float

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError("kappa > 0 required")
        if not (isinstance(self.mu, (int, np.integer)) and self.mu >= 1):
            raise ValueError("mu must be a positive integer in the matrix model")
        if not self.m > 0:
            raise ValueError("m > 0 required")
        if not self.gamma_bar > 0:
            raise ValueError("gamma_bar > 0 required")


def map_siso(params: SisoKappaMuParams) -> ScaledIdentityParams:
    """Embed a SISO kappa-mu shadowed channel as an n=1 instance.

    Identifications: p = mu, m = m,
    1/sigma2_Sigma = mu (1+kappa) / gamma_bar,
    sigma2_M = m (1+kappa) / (kappa gamma_bar).
    With these, E[y] = p sigma2_Sigma + m / sigma2_M = gamma_bar, so the SNR
    gamma = gamma_bar * y / E[y] coincides with y itself.
    """
    k, mu, m, gbar = params.kappa, params.mu, params.m, params.gamma_bar
    return ScaledIdentityParams(
        n=1, p=int(mu), m=m,
        sigma2_Sigma=gbar / (mu * (1.0 + k)),
        sigma2_M=m * (1.0 + k) / (k * gbar),
    )
