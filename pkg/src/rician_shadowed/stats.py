"""Closed-form statistics of the Gram matrix: log-pdf, MGF, joint eigenvalue
density, and the maximum-eigenvalue CDF/PDF in the scaled-identity regime.

The CDF is C * det(Upsilon(x)).  Entries of the n x n kernel matrix
Upsilon come in two interchangeable forms: a closed form built from Gauss
2F1 and Humbert Phi1 (valid for m < p) and an integral form (any m > n-1,
including m = p and m > p).  Each is the other's oracle; every entry is
carried as (sign, ln|.|) and determinants are assembled from row-scaled
factorizations so large p, m and abscissae do not overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import gammaln, roots_legendre

from .errors import NumericalConsistencyError
from .logspace import NEG_INF, signed_log_add
from .matrixhyp import matrix_1f1_ln
from .model import ModelParams, ScaledIdentityParams, _as_hermitian_pd
from .sampling import hermitian_sqrt
from .scalar import (gauss_2f1_ln, kummer_1f1_ln_grid, log_multivariate_gamma,
                     phi1_ln_grid)
from .series import DEFAULT_POLICY, SeriesPolicy

_CDF_SLACK = 1e-9
_QUAD_REL_TOL = 1e-10
_QUAD_ABS_TOL = 1e-12

EntryMethod = Literal["closed_form", "quadrature"]


@dataclass(frozen=True)
class UpsilonMatrix:
    """CDF kernel matrix at abscissa x, entries as sign and log magnitude."""

    x: float
    signs: np.ndarray
    ln_mags: np.ndarray

    def values(self) -> np.ndarray:
        return self.signs * np.exp(self.ln_mags)


# ---------------------------------------------------------------------------
# Gram-matrix pdf and MGF (general Hermitian Sigma, M)
# ---------------------------------------------------------------------------


def _ln_det_hermitian(a: np.ndarray) -> float:
    sign, val = np.linalg.slogdet(a)
    if not (sign.real > 0 and abs(sign.imag) < 1e-9):
        raise ValueError("matrix must have positive determinant")
    return float(val)


def _hyp_arg_eigs(params: ModelParams, a: np.ndarray) -> np.ndarray:
    """Eigenvalues of Sigma^-1 (Sigma^-1 + M)^-1 Sigma^-1 A (all real >= 0)."""
    si = np.linalg.inv(params.Sigma)
    t = si @ np.linalg.inv(si + params.M) @ si
    th = hermitian_sqrt(0.5 * (t + t.conj().T))
    return np.linalg.eigvalsh(th @ a @ th)


def gamma_wishart_logpdf(a, params: ModelParams) -> float:
    """Log density of the Gram matrix Y at the Hermitian PD point A."""
    a = _as_hermitian_pd("A", a, params.n)
    si = np.linalg.inv(params.Sigma)
    eigs = _hyp_arg_eigs(params, a)
    sign_f, ln_f = matrix_1f1_ln(params.m, float(params.p), eigs)
    if sign_f <= 0:
        raise NumericalConsistencyError("matrix 1F1 evaluated nonpositive")
    return (
        -float(np.trace(si @ a).real)
        + (params.p - params.n) * _ln_det_hermitian(a)
        + params.m * _ln_det_hermitian(params.M)
        - log_multivariate_gamma(params.n, float(params.p))
        - params.p * _ln_det_hermitian(params.Sigma)
        - params.m * _ln_det_hermitian(si + params.M)
        + ln_f
    )


def mgf(s, params: ModelParams) -> float:
    """Moment generating function E[etr(Y S)] at a Hermitian matrix S."""
    s = np.asarray(s, dtype=complex)
    if s.shape != (params.n, params.n):
        raise ValueError(f"S must be {params.n}x{params.n}")
    if np.max(np.abs(s - s.conj().T)) > 1e-10 * max(1.0, float(np.max(np.abs(s)))):
        raise ValueError("S must be Hermitian")
    si = np.linalg.inv(params.Sigma)
    g = si - s
    if float(np.linalg.eigvalsh(g)[0]) <= 0.0:
        raise ValueError("MGF domain requires -S + Sigma^-1 positive definite")
    gh_inv = np.linalg.inv(hermitian_sqrt(g))
    t = si @ np.linalg.inv(si + params.M) @ si
    w = gh_inv @ t @ gh_inv
    mu = np.linalg.eigvalsh(0.5 * (w + w.conj().T))
    if float(mu[-1]) >= 1.0:
        raise ValueError("MGF does not exist: I - T(-S + Sigma^-1)^-1 not positive definite")
    ln_val = (
        -params.p * _ln_det_hermitian(g)
        + params.m * _ln_det_hermitian(params.M)
        - params.p * _ln_det_hermitian(params.Sigma)
        - params.m * _ln_det_hermitian(si + params.M)
        - params.m * float(np.sum(np.log1p(-mu)))
    )
    return math.exp(ln_val)


# ---------------------------------------------------------------------------
# joint eigenvalue density (scaled identity)
# ---------------------------------------------------------------------------


def joint_eigenvalue_logpdf(spectrum, params: ScaledIdentityParams) -> float:
    """Log of the ordered-eigenvalue joint density 0 < phi_1 < ... < phi_n."""
    phis = np.asarray(spectrum, dtype=float).ravel()
    n, p, m = params.n, params.p, params.m
    if phis.size != n:
        raise ValueError(f"expected {n} eigenvalues, got {phis.size}")
    if np.any(phis <= 0) or np.any(np.diff(phis) <= 0):
        raise ValueError("eigenvalues must be strictly positive and strictly ascending")
    s2 = params.sigma2_Sigma
    big_s = s2 * params.sigma2_M
    ln = n * (n - 1) * math.log(math.pi)
    for i in range(n):
        for j in range(i + 1, n):
            ln += 2.0 * math.log(phis[j] - phis[i])
    ln -= p * n * math.log(s2)
    ln -= log_multivariate_gamma(n, float(n)) + log_multivariate_gamma(n, float(p))
    ln -= n * m * math.log1p(1.0 / big_s)
    ln += (p - n) * float(np.sum(np.log(phis)))
    ln -= float(np.sum(phis)) / s2
    sign_f, ln_f = matrix_1f1_ln(m, float(p), phis / (s2 * (1.0 + big_s)))
    if sign_f <= 0:
        raise NumericalConsistencyError("matrix 1F1 evaluated nonpositive")
    return ln + ln_f


# ---------------------------------------------------------------------------
# Upsilon kernel entries
# ---------------------------------------------------------------------------


def _upsilon_closed_grid(xs: np.ndarray, params: ScaledIdentityParams,
                         policy: SeriesPolicy) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form entries for all x in xs; returns (signs, lns) of shape (nx, n, n).

    Requires m < p.  The x-independent 2F1 term and a Phi1 table shared
    across the column index and the finite k-sum make whole-curve
    evaluation cheap.
    """
    n, p, m = params.n, params.p, params.m
    if not m < p:
        raise ValueError(f"closed-form kernel entries require m < p, got m={m}, p={p}")
    tau = params.tau
    s2 = params.sigma2_Sigma
    big_s = s2 * params.sigma2_M
    lam = 1.0 / (1.0 + big_s)
    zs = xs / s2
    with np.errstate(divide="ignore"):
        ln_z = np.log(zs)
    signs = np.zeros((xs.size, n, n))
    lns = np.full((xs.size, n, n), NEG_INF)
    for i in range(1, n + 1):
        a_i = m - i + 1.0
        c_i = p - i + 1.0
        bs = np.arange(1, tau - i + 1, dtype=float)
        ln_phi = phi1_ln_grid(a_i, bs, c_i, lam, lam * zs)   # (nb, nx)
        for j in range(1, n + 1):
            cc = tau - i - j + 1  # integer >= 1
            _, ln_a = gauss_2f1_ln(a_i, float(cc), c_i, lam, policy)
            ln_a += math.lgamma(cc)
            ks = np.arange(cc)
            # ln of z^k/k! * Phi1(a, cc-k, c; lam, lam z), summed over k
            with np.errstate(invalid="ignore"):
                kl = ks[:, None] * ln_z[None, :]
            kl[ks == 0, :] = 0.0  # 0 * log(0) at z=0
            terms = kl - gammaln(ks + 1.0)[:, None] + ln_phi[cc - 1 - ks, :]
            tmax = np.max(terms, axis=0)
            # Gamma(cc) multiplies the whole bracket, both the 2F1 term and
            # the subtracted Phi1 sum
            ln_b = (tmax + np.log(np.sum(np.exp(terms - tmax[None, :]), axis=0))
                    - zs + math.lgamma(cc))
            ln_pref = (p - j + 1) * math.log(s2) + (i - n) * math.log1p(big_s)
            for t in range(xs.size):
                sgn, lnv = signed_log_add(1.0, ln_a, -1.0, float(ln_b[t]))
                signs[t, i - 1, j - 1] = sgn
                lns[t, i - 1, j - 1] = lnv + ln_pref
    return signs, lns


_GL16 = roots_legendre(16)
_GL32 = roots_legendre(32)


def _panel_ln_rows(g_rows, lo: float, hi: float, depth: int = 0) -> np.ndarray:
    """ln of int_lo^hi exp(g_rows(y)) dy per row, by adaptive bisected GL16/32."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    y16 = mid + half * _GL16[0]
    y32 = mid + half * _GL32[0]
    g16 = g_rows(y16)
    g32 = g_rows(y32)
    m16 = np.max(g16, axis=-1, keepdims=True)
    m32 = np.max(g32, axis=-1, keepdims=True)
    scale = np.maximum(m16, m32)
    scale[~np.isfinite(scale)] = 0.0
    i16 = np.sum(np.exp(g16 - scale) * _GL16[1], axis=-1) * half
    i32 = np.sum(np.exp(g32 - scale) * _GL32[1], axis=-1) * half
    err = np.abs(i32 - i16)
    tol = _QUAD_REL_TOL * np.abs(i32) + _QUAD_ABS_TOL
    if depth >= 48 or np.all(err <= tol):
        with np.errstate(divide="ignore"):
            return scale[..., 0] + np.log(i32)
    left = _panel_ln_rows(g_rows, lo, mid, depth + 1)
    right = _panel_ln_rows(g_rows, mid, hi, depth + 1)
    return np.logaddexp(left, right)


def _upsilon_quad_grid(xs: np.ndarray, params: ScaledIdentityParams,
                       policy: SeriesPolicy) -> tuple[np.ndarray, np.ndarray]:
    """Integral-form entries, cumulative over the sorted grid xs."""
    n, p, m = params.n, params.p, params.m
    tau = params.tau
    s2 = params.sigma2_Sigma
    big_s = s2 * params.sigma2_M
    lam = 1.0 / (1.0 + big_s)
    order = np.argsort(xs)
    xs_sorted = xs[order]
    signs = np.zeros((xs.size, n, n))
    lns = np.full((xs.size, n, n), NEG_INF)
    for i in range(1, n + 1):
        a_i = m - i + 1.0
        c_i = p - i + 1.0
        pows = np.array([tau - i - j for j in range(1, n + 1)], dtype=float)

        def g_rows(y, a_i=a_i, c_i=c_i, pows=pows):
            # quadrature nodes are strictly interior, so y > 0 here
            y = np.asarray(y, dtype=float)
            ln_f = kummer_1f1_ln_grid(a_i, c_i, lam * y / s2, policy)
            base = -y / s2 + ln_f
            return pows[:, None] * np.log(y)[None, :] + base[None, :]

        ln_pref = (i - n) * (math.log(s2) + math.log1p(big_s))
        acc = np.full(n, NEG_INF)
        prev = 0.0
        for t, x in enumerate(xs_sorted):
            if x > prev:
                seg = _panel_ln_rows(g_rows, prev, float(x))
                acc = np.logaddexp(acc, seg)
                prev = float(x)
            row = acc + ln_pref
            idx = order[t]
            signs[idx, i - 1, :] = np.where(np.isfinite(row), 1.0, 0.0)
            lns[idx, i - 1, :] = row
    return signs, lns


def upsilon_matrix(x: float, params: ScaledIdentityParams,
                   method: EntryMethod | None = None,
                   policy: SeriesPolicy = DEFAULT_POLICY) -> UpsilonMatrix:
    """Kernel matrix at a single abscissa; method defaults to the closed form
    for m < p and the integral form otherwise."""
    if x < 0:
        raise ValueError("x >= 0 required")
    if method is None:
        method = "closed_form" if params.m < params.p else "quadrature"
    xs = np.asarray([float(x)])
    if method == "closed_form":
        s, l = _upsilon_closed_grid(xs, params, policy)
    elif method == "quadrature":
        s, l = _upsilon_quad_grid(xs, params, policy)
    else:
        raise ValueError(f"unknown method {method!r}")
    return UpsilonMatrix(x=float(x), signs=s[0], ln_mags=l[0])


def upsilon_entry(i: int, j: int, x: float, params: ScaledIdentityParams,
                  method: EntryMethod = "closed_form",
                  policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Single kernel entry (i, j both 1-based)."""
    if not (1 <= i <= params.n and 1 <= j <= params.n):
        raise ValueError("entry indices must lie in 1..n")
    u = upsilon_matrix(x, params, method=method, policy=policy)
    return float(u.signs[i - 1, j - 1] * np.exp(u.ln_mags[i - 1, j - 1]))


# ---------------------------------------------------------------------------
# maximum-eigenvalue CDF / PDF
# ---------------------------------------------------------------------------


def _ln_cdf_constant(params: ScaledIdentityParams) -> float:
    n, p, m = params.n, params.p, params.m
    s2 = params.sigma2_Sigma
    big_s = s2 * params.sigma2_M
    return (n * (n - 1) * math.log(math.pi)
            + 0.5 * n * (n - 1) * (math.log(s2) + math.log1p(big_s))
            - p * n * math.log(s2)
            - log_multivariate_gamma(n, float(n))
            - log_multivariate_gamma(n, float(p))
            - n * m * math.log1p(1.0 / big_s))


def _upsilon_grid(xs: np.ndarray, params: ScaledIdentityParams,
                  method: EntryMethod | None,
                  policy: SeriesPolicy) -> tuple[np.ndarray, np.ndarray]:
    if method is None:
        method = "closed_form" if params.m < params.p else "quadrature"
    if method == "closed_form":
        return _upsilon_closed_grid(xs, params, policy)
    if method == "quadrature":
        return _upsilon_quad_grid(xs, params, policy)
    raise ValueError(f"unknown method {method!r}")


def _det_ln_scaled(signs: np.ndarray, lns: np.ndarray) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Row-scaled determinant of a signed-log matrix.

    Returns (sign, ln|det|, row_shifts, scaled_matrix)."""
    row_shift = np.max(lns, axis=1)
    row_shift[~np.isfinite(row_shift)] = 0.0
    mat = signs * np.exp(lns - row_shift[:, None])
    s, l = np.linalg.slogdet(mat)
    return float(s), float(l), row_shift, mat


def max_eig_cdf_grid(xs, params: ScaledIdentityParams,
                     method: EntryMethod | None = None,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Maximum-eigenvalue CDF on a grid of abscissae."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs < 0):
        raise ValueError("x >= 0 required")
    ln_c = _ln_cdf_constant(params)
    signs, lns = _upsilon_grid(xs, params, method, policy)
    out = np.empty(xs.size)
    for t in range(xs.size):
        s, l, shift, _ = _det_ln_scaled(signs[t], lns[t])
        val = 0.0 if s == 0 else s * math.exp(min(ln_c + float(np.sum(shift)) + l, 700.0))
        if not -_CDF_SLACK <= val <= 1.0 + _CDF_SLACK:
            raise NumericalConsistencyError(
                f"CDF value {val} at x={xs[t]} outside [0,1] beyond slack {_CDF_SLACK}")
        out[t] = min(max(val, 0.0), 1.0)
    return out


def max_eig_cdf(x: float, params: ScaledIdentityParams,
                method: EntryMethod | None = None,
                policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """CDF of the largest Gram eigenvalue at x (scaled-identity regime)."""
    return float(max_eig_cdf_grid(np.asarray([x]), params, method, policy)[0])


def _deriv_ln_grid(xs: np.ndarray, params: ScaledIdentityParams,
                   policy: SeriesPolicy) -> tuple[np.ndarray, np.ndarray]:
    """Entries of the x-derivative of the kernel matrix (integral form with
    the integral removed)."""
    n, p, m = params.n, params.p, params.m
    tau = params.tau
    s2 = params.sigma2_Sigma
    big_s = s2 * params.sigma2_M
    lam = 1.0 / (1.0 + big_s)
    signs = np.zeros((xs.size, n, n))
    lns = np.full((xs.size, n, n), NEG_INF)
    with np.errstate(divide="ignore"):
        ln_x = np.log(xs)
    for i in range(1, n + 1):
        ln_f = kummer_1f1_ln_grid(m - i + 1.0, p - i + 1.0, lam * xs / s2, policy)
        ln_pref = (i - n) * (math.log(s2) + math.log1p(big_s))
        for j in range(1, n + 1):
            pw = tau - i - j
            term = (pw * ln_x if pw else np.zeros_like(xs)) - xs / s2 + ln_f + ln_pref
            signs[:, i - 1, j - 1] = np.where(np.isfinite(term), 1.0, 0.0)
            lns[:, i - 1, j - 1] = term
    return signs, lns


def max_eig_pdf_grid(xs, params: ScaledIdentityParams,
                     method: EntryMethod | None = None,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Maximum-eigenvalue PDF on a grid: C |Upsilon| tr(Upsilon^-1 J)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x > 0 required")
    ln_c = _ln_cdf_constant(params)
    u_signs, u_lns = _upsilon_grid(xs, params, method, policy)
    j_signs, j_lns = _deriv_ln_grid(xs, params, policy)
    out = np.empty(xs.size)
    for t in range(xs.size):
        s, l, shift, mat = _det_ln_scaled(u_signs[t], u_lns[t])
        ok = s != 0 and np.isfinite(l)
        if ok:
            rhs = j_signs[t] * np.exp(j_lns[t] - shift[:, None])
            try:
                tr = float(np.trace(np.linalg.solve(mat, rhs)))
            except np.linalg.LinAlgError:
                ok = False
            if ok and not math.isfinite(tr):
                ok = False
        if ok:
            val = s * math.exp(min(ln_c + float(np.sum(shift)) + l, 700.0)) * tr
        else:
            # kernel numerically singular (deep lower tail): centered finite
            # difference of the CDF
            h = max(1e-6 * xs[t], 1e-9)
            lo = max(xs[t] - h, 0.0)
            f = max_eig_cdf_grid(np.asarray([lo, xs[t] + h]), params, method, policy)
            val = float((f[1] - f[0]) / (xs[t] + h - lo))
        if val < -_CDF_SLACK:
            raise NumericalConsistencyError(f"pdf value {val} at x={xs[t]} below zero")
        out[t] = max(val, 0.0)
    return out


def max_eig_pdf(x: float, params: ScaledIdentityParams,
                method: EntryMethod | None = None,
                policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """PDF of the largest Gram eigenvalue at x > 0 (scaled-identity regime)."""
    return float(max_eig_pdf_grid(np.asarray([x]), params, method, policy)[0])


# ---------------------------------------------------------------------------
# unification limits (Table I reductions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitLaw:
    """Limiting Gram law under a Table-I reduction.

    covariance is the central/noncentral Wishart covariance; noncentrality
    is Sigma^-1 times the preserved LOS Gram mean (None for the central
    cases); los_gram_mean is that mean itself; approx is a finite-parameter
    member of the family approaching the limit (None when the reduction is
    exact, as for m = p).
    """

    kind: str
    dof: int
    covariance: np.ndarray
    noncentrality: np.ndarray | None
    los_gram_mean: np.ndarray | None
    approx: ModelParams | None


def reduction_params(kind: str, params: ModelParams | ScaledIdentityParams,
                     limit_scale: float = 1.0) -> LimitLaw:
    """Describe the limiting law for a Table-I reduction.

    kind:
      rayleigh_limit -- M^-1 -> 0: central Wishart W_n(p, Sigma); approx
        scales M by limit_scale.
      rayleigh_mp    -- m = p: central Wishart W_n(p, Sigma + M^-1), exact.
      rician_limit   -- m -> inf with m M^-1 fixed: noncentral Wishart with
        LOS Gram mean Q = m M^-1; approx scales m and M jointly by
        limit_scale so Q is preserved.
    """
    if isinstance(params, ScaledIdentityParams):
        params = params.to_model_params()
    if limit_scale <= 0:
        raise ValueError("limit_scale > 0 required")
    m_inv = np.linalg.inv(params.M)
    if kind == "rayleigh_limit":
        approx = ModelParams(params.n, params.p, params.m,
                             params.Sigma, params.M * limit_scale)
        return LimitLaw(kind, params.p, params.Sigma.copy(), None, None, approx)
    if kind == "rayleigh_mp":
        cov = params.Sigma + m_inv
        approx = ModelParams(params.n, params.p, float(params.p), params.Sigma, params.M)
        return LimitLaw(kind, params.p, cov, None, None, approx)
    if kind == "rician_limit":
        q = params.m * m_inv
        theta = np.linalg.inv(params.Sigma) @ q
        approx = ModelParams(params.n, params.p, params.m * limit_scale,
                             params.Sigma, params.M * limit_scale)
        return LimitLaw(kind, params.p, params.Sigma.copy(), theta, q, approx)
    raise ValueError(f"unknown reduction kind {kind!r}")
