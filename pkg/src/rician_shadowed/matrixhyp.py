"""Hypergeometric functions of a Hermitian matrix argument.

The series route sums complex zonal polynomials over integer partitions,
grouped by total weight; the determinant route (distinct eigenvalues only)
collapses the confluent case to an n x n determinant of scalar 1F1 values
over a Vandermonde.  Both are exposed because each is the other's oracle.

Normalization: C_kappa(X) = f_kappa * s_kappa(eigenvalues) with f_kappa the
standard-Young-tableaux count, so that sum over partitions of weight k of
C_kappa(X) equals (tr X)^k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateSpectrumError, NonConvergenceError
from .logspace import NEG_INF, ln_to_value, signed_log_add, signed_log_sum
from .partitions import Partition, enumerate_partitions
from .scalar import kummer_1f1_ln, pochhammer_ln
from .series import MATRIX_POLICY, SeriesPolicy

# below this relative eigenvalue gap the bialternant/Vandermonde routes are
# abandoned for the clustered-spectrum alternatives
GAP_THRESHOLD = 1e-6


@dataclass(frozen=True)
class EigenSpectrum:
    """Sorted (ascending) real eigenvalues of a Hermitian matrix."""

    values: tuple[float, ...]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("eigenvalues must be finite")
        if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "n", len(vals))


def _values(spectrum) -> np.ndarray:
    if isinstance(spectrum, EigenSpectrum):
        return np.asarray(spectrum.values, dtype=float)
    return np.asarray(spectrum, dtype=float).ravel()


def _min_relative_gap(values: np.ndarray) -> float:
    if values.size < 2:
        return math.inf
    v = np.sort(values)
    scale = max(float(np.max(np.abs(v))), 1e-300)
    return float(np.min(np.diff(v))) / scale


def complex_pochhammer_ln(a: float, kappa: Partition | Sequence[int]) -> tuple[float, float]:
    """(sign, ln|.|) of [a]_kappa = prod_i (a - i + 1)_{k_i}."""
    parts = kappa.parts if isinstance(kappa, Partition) else tuple(kappa)
    sign, ln = 1.0, 0.0
    for i, k_i in enumerate(parts, start=1):
        s, l = pochhammer_ln(a - i + 1, int(k_i))
        if s == 0:
            return 0.0, NEG_INF
        sign *= s
        ln += l
    return sign, ln


def complex_pochhammer(a: float, kappa: Partition | Sequence[int]) -> float:
    return ln_to_value(*complex_pochhammer_ln(a, kappa))


def count_standard_tableaux(kappa: Partition) -> float:
    """f_kappa, the number of standard Young tableaux of shape kappa."""
    parts = kappa.parts
    if not parts:
        return 1.0
    n = len(parts)
    l = np.array(parts, dtype=float) + np.arange(n - 1, -1, -1, dtype=float)
    ln = math.lgamma(kappa.weight + 1) - float(np.sum([math.lgamma(li + 1) for li in l]))
    for i in range(n):
        for j in range(i + 1, n):
            ln += math.log(l[i] - l[j])
    return round(math.exp(ln))


def _complete_homogeneous(values: np.ndarray, rmax: int) -> np.ndarray:
    """h_0..h_rmax of the given variables via the power-sum recurrence."""
    p = np.array([np.sum(values ** i) for i in range(1, rmax + 1)])
    h = np.zeros(rmax + 1)
    h[0] = 1.0
    for r in range(1, rmax + 1):
        h[r] = np.dot(p[:r][::-1], h[:r]) / r
    return h


def schur_polynomial(kappa: Partition, spectrum) -> float:
    """Schur polynomial s_kappa at the given eigenvalues.

    Bialternant ratio for well-separated eigenvalues; Jacobi-Trudi
    (determinant in complete homogeneous symmetric polynomials) when the
    spectrum is clustered and the Vandermonde denominator degenerates.
    """
    vals = _values(spectrum)
    n = vals.size
    if len(kappa) > n:
        return 0.0
    if kappa.weight == 0:
        return 1.0
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        return 0.0
    mu = vals / scale
    if _min_relative_gap(mu) > GAP_THRESHOLD:
        l = np.array(tuple(kappa.parts) + (0,) * (n - len(kappa)), dtype=int) \
            + np.arange(n - 1, -1, -1)
        num = np.linalg.det(mu[None, :] ** l[:, None])
        den = np.linalg.det(mu[None, :] ** np.arange(n - 1, -1, -1)[:, None])
        val = num / den
    else:
        ell = len(kappa)
        h = _complete_homogeneous(mu, kappa.parts[0] + ell)
        m = np.zeros((ell, ell))
        for i in range(ell):
            for j in range(ell):
                idx = kappa.parts[i] - (i + 1) + (j + 1)
                if idx >= 0:
                    m[i, j] = h[idx]
        val = np.linalg.det(m)
    return float(val * scale ** kappa.weight)


def zonal_polynomial(kappa: Partition, spectrum) -> float:
    """Complex zonal polynomial, normalized so the weight-k sum is (tr X)^k."""
    if len(kappa) > _values(spectrum).size:
        return 0.0
    return count_standard_tableaux(kappa) * schur_polynomial(kappa, spectrum)


# ---------------------------------------------------------------------------
# series evaluation, batched per weight group
# ---------------------------------------------------------------------------


def _cpoch_ln_batch(a: float, parts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signs and ln magnitudes of [a]_kappa for a (nk, n) matrix of padded parts."""
    nk, n = parts.shape
    # row i (1-based) contributes (a - i + 1)_{k_i}
    shifts = a - np.arange(n, dtype=float)
    if a - n + 1 > 0:
        from scipy.special import gammaln
        ln = np.sum(gammaln(shifts[None, :] + parts) - gammaln(shifts)[None, :], axis=1)
        return np.ones(nk), ln
    signs = np.empty(nk)
    lns = np.empty(nk)
    for q in range(nk):
        s, l = 1.0, 0.0
        for i in range(n):
            si, li = pochhammer_ln(shifts[i], int(parts[q, i]))
            if si == 0:
                s, l = 0.0, NEG_INF
                break
            s *= si
            l += li
        signs[q] = s
        lns[q] = l
    return signs, lns


def _schur_ln_batch_bialternant(L: np.ndarray, mu: np.ndarray,
                                ln_vdm: float, sign_vdm: float) -> tuple[np.ndarray, np.ndarray]:
    """Signs/lns of s_kappa(mu) for padded l-vectors, via batched bialternant."""
    lmax = int(L.max())
    powers = mu[None, :] ** np.arange(lmax + 1)[:, None]      # (lmax+1, n)
    mats = powers[L]                                          # (nk, n, n)
    signs, lns = np.linalg.slogdet(mats)
    return signs * sign_vdm, lns - ln_vdm


def _schur_ln_batch_jacobi_trudi(parts: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signs/lns of s_kappa(mu) via batched Jacobi-Trudi h-determinants."""
    nk, n = parts.shape
    i_idx = np.arange(1, n + 1)
    idx = parts[:, :, None] - i_idx[None, :, None] + i_idx[None, None, :]
    valid = idx >= 0
    mats = np.where(valid, h[np.clip(idx, 0, h.size - 1)], 0.0)
    signs, lns = np.linalg.slogdet(mats)
    return signs, lns


def _hyp_series_ln(num_params: tuple[float, ...], den_params: tuple[float, ...],
                   values: np.ndarray, policy: SeriesPolicy) -> tuple[float, float]:
    """(sign, ln) of sum_k sum_kappa prod[a]_kappa / prod[b]_kappa * C_kappa / k!."""
    n = values.size
    scale = float(np.max(np.abs(values))) if n else 0.0
    if scale == 0.0:
        return 1.0, 0.0
    mu = values / scale
    ln_scale = math.log(scale)

    use_bialternant = _min_relative_gap(mu) > GAP_THRESHOLD
    if use_bialternant:
        # reference Vandermonde det(mu_j^(n-i)) = prod_{i<j}(mu_i - mu_j)
        sign_vdm, ln_vdm = 1.0, 0.0
        for i in range(n):
            for j in range(i + 1, n):
                d = mu[i] - mu[j]
                if d < 0:
                    sign_vdm = -sign_vdm
                ln_vdm += math.log(abs(d))
    else:
        h_cache = _complete_homogeneous(mu, policy.max_terms + n + 1)

    total_s, total_l = 1.0, 0.0  # k = 0 group
    small = 0
    from scipy.special import gammaln
    for k in range(1, policy.max_terms + 1):
        parts_list = enumerate_partitions(k, n)
        parts = np.zeros((len(parts_list), n), dtype=int)
        for q, kap in enumerate(parts_list):
            parts[q, :len(kap)] = kap.parts
        L = parts + np.arange(n - 1, -1, -1)[None, :]

        # ln of f_kappa / k! = V(l) / prod l_i!
        ln_w = -np.sum(gammaln(L + 1.0), axis=1)
        for i in range(n):
            for j in range(i + 1, n):
                ln_w += np.log((L[:, i] - L[:, j]).astype(float))

        sgn = np.ones(len(parts_list))
        ln_t = ln_w + k * ln_scale
        for a in num_params:
            s_a, l_a = _cpoch_ln_batch(a, parts)
            sgn *= s_a
            ln_t += l_a
        for b in den_params:
            s_b, l_b = _cpoch_ln_batch(b, parts)
            if np.any(s_b == 0):
                raise ValueError(
                    f"denominator complex Pochhammer [{b}]_kappa vanishes at weight {k}")
            sgn *= s_b
            ln_t -= l_b
        if use_bialternant:
            s_s, l_s = _schur_ln_batch_bialternant(L, mu, ln_vdm, sign_vdm)
        else:
            s_s, l_s = _schur_ln_batch_jacobi_trudi(parts, h_cache)
        sgn *= s_s
        ln_t += l_s

        g_s, g_l = signed_log_sum(sgn, ln_t)
        total_s, total_l = signed_log_add(total_s, total_l, g_s, g_l)
        if g_s == 0 or g_l - total_l < math.log(policy.rel_tolerance):
            small += 1
            if small >= policy.consecutive_small_terms:
                return total_s, total_l
        else:
            small = 0
    raise NonConvergenceError(
        f"matrix hypergeometric series: no convergence within weight {policy.max_terms}")


_KINDS = ("0F1", "1F1", "1F0")


def hyp_matrix_ln(kind: str, spectrum, a: float | None = None, b: float | None = None,
                  policy: SeriesPolicy = MATRIX_POLICY) -> tuple[float, float]:
    """(sign, ln|.|) of 0F1(b; X), 1F1(a; b; X) or 1F0(a; X) of matrix argument."""
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}")
    vals = _values(spectrum)
    if kind == "1F0":
        if a is None:
            raise ValueError("1F0 requires parameter a")
        if np.any(vals >= 1.0):
            raise ValueError("1F0 requires all eigenvalues < 1")
        # closed determinant form |I - X|^(-a)
        return 1.0, float(-a * np.sum(np.log1p(-vals)))
    if kind == "0F1":
        if b is None:
            raise ValueError("0F1 requires parameter b")
        return _hyp_series_ln((), (float(b),), vals, policy)
    if a is None or b is None:
        raise ValueError("1F1 requires parameters a and b")
    return _hyp_series_ln((float(a),), (float(b),), vals, policy)


def hyp_matrix(kind: str, spectrum, a: float | None = None, b: float | None = None,
               policy: SeriesPolicy = MATRIX_POLICY) -> float:
    """Matrix-argument hypergeometric function (series; 1F0 by determinant)."""
    return ln_to_value(*hyp_matrix_ln(kind, spectrum, a=a, b=b, policy=policy))


def hyp_1f1_matrix_detratio_ln(a: float, b: float, spectrum,
                               policy: SeriesPolicy = MATRIX_POLICY) -> tuple[float, float]:
    """(sign, ln|.|) of 1F1(a; b; X) by the determinant-ratio formula.

    For distinct eigenvalues x_1..x_n:

        1F1(a;b;X) = [prod_i Gamma(b-i+1)/Gamma(b-n+1)]
                     * det[ 1F1(a-i+1; b-n+1; x_j) ] / prod_{i<j}(x_i - x_j)
    """
    vals = _values(spectrum)
    n = vals.size
    if n == 0:
        return 1.0, 0.0
    if not b > n - 1:
        raise ValueError(f"determinant-ratio 1F1 requires b > n - 1, got b={b}")
    if _min_relative_gap(vals) <= GAP_THRESHOLD:
        raise DegenerateSpectrumError(
            f"eigenvalue relative gap below {GAP_THRESHOLD}; use the series form")
    # the caller's policy counts matrix weight groups; scalar 1F1 entries
    # need a term budget of their own
    scalar_policy = SeriesPolicy(rel_tolerance=policy.rel_tolerance,
                                 max_terms=max(policy.max_terms, 10_000),
                                 consecutive_small_terms=policy.consecutive_small_terms)
    signs = np.empty((n, n))
    lns = np.empty((n, n))
    for i in range(1, n + 1):
        for j in range(n):
            s, l = kummer_1f1_ln(a - i + 1, b - n + 1, float(vals[j]), scalar_policy)
            signs[i - 1, j] = s
            lns[i - 1, j] = l
    row_shift = np.max(lns, axis=1)
    dead = ~np.isfinite(row_shift)
    row_shift[dead] = 0.0
    mat = signs * np.exp(lns - row_shift[:, None])
    s_det, l_det = np.linalg.slogdet(mat)
    if s_det == 0:
        return 0.0, NEG_INF
    sign_v, ln_v = 1.0, 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = vals[i] - vals[j]
            if d < 0:
                sign_v = -sign_v
            ln_v += math.log(abs(d))
    ln_pref = sum(math.lgamma(b - i + 1) for i in range(1, n + 1)) - n * math.lgamma(b - n + 1)
    return s_det * sign_v, ln_pref + float(np.sum(row_shift)) + l_det - ln_v


def hyp_1f1_matrix_detratio(a: float, b: float, spectrum,
                            policy: SeriesPolicy = MATRIX_POLICY) -> float:
    return ln_to_value(*hyp_1f1_matrix_detratio_ln(a, b, spectrum, policy))


def matrix_1f1_ln(a: float, b: float, spectrum,
                  policy: SeriesPolicy = MATRIX_POLICY) -> tuple[float, float]:
    """1F1 of matrix argument: determinant ratio when the spectrum allows it,
    zonal series (with an enlarged weight budget) otherwise."""
    vals = _values(spectrum)
    if vals.size and _min_relative_gap(vals) > GAP_THRESHOLD and b > vals.size - 1:
        return hyp_1f1_matrix_detratio_ln(a, b, vals, policy)
    fallback = SeriesPolicy(rel_tolerance=policy.rel_tolerance,
                            max_terms=max(policy.max_terms, 4000),
                            consecutive_small_terms=policy.consecutive_small_terms)
    return _hyp_series_ln((float(a),), (float(b),), vals, fallback)
