"""Scalar special functions: gamma family, Pochhammer symbols, Kummer 1F1,
Gauss 2F1 and the two-variable confluent (Humbert) function Phi1.

Everything needed by the matrix-argument machinery and the closed-form
eigenvalue statistics is provided both in plain float form and in
log-magnitude form (``*_ln``); the log forms are what the higher layers use
to survive large shape parameters and abscissae.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy import special as sp

from .errors import NonConvergenceError
from .logspace import NEG_INF, ln_to_value, signed_log_add
from .series import DEFAULT_POLICY, SeriesPolicy

LOG_PI = math.log(math.pi)

# Kummer 1F1: beyond this argument a terminating transform is preferred
# when available (b - a a nonpositive integer).
_KUMMER_TRANSFORM_X = 40.0
# Humbert Phi1: beyond these the double series is replaced by the
# single-integral (Euler-type) representation.
_PHI1_SERIES_MAX_Y = 30.0
_PHI1_SERIES_MAX_X = 0.95

_INT_TOL = 1e-9


def _is_nonpositive_integer(x: float, tol: float = _INT_TOL) -> bool:
    return x <= tol and abs(x - round(x)) <= tol


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_multivariate_gamma(n: int, a: float) -> float:
    """ln of the complex multivariate gamma function:
    pi^(n(n-1)/2) * prod_{i=1}^{n} Gamma(a - i + 1).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not a > n - 1:
        raise ValueError(f"log_multivariate_gamma requires a > n - 1, got a={a}, n={n}")
    return 0.5 * n * (n - 1) * LOG_PI + sum(math.lgamma(a - i + 1) for i in range(1, n + 1))


def pochhammer_ln(a: float, k: int) -> tuple[float, float]:
    """(sign, ln|.|) of the rising factorial (a)_k."""
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    if k == 0:
        return 1.0, 0.0
    if a > 0:
        # all factors positive
        return 1.0, math.lgamma(a + k) - math.lgamma(a)
    factors = a + np.arange(k, dtype=float)
    if np.any(factors == 0.0):
        return 0.0, NEG_INF
    sign = -1.0 if np.count_nonzero(factors < 0) % 2 else 1.0
    return sign, float(np.sum(np.log(np.abs(factors))))


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1)."""
    return ln_to_value(*pochhammer_ln(a, k))


def _sum_with_policy(term_iter, policy: SeriesPolicy, what: str) -> float:
    """Sum terms from an iterator under the group-of-small-terms stop rule."""
    total = 0.0
    small = 0
    for i, term in enumerate(term_iter):
        total += term
        if abs(term) <= policy.rel_tolerance * abs(total):
            small += 1
            if small >= policy.consecutive_small_terms:
                return total
        else:
            small = 0
        if i + 1 >= policy.max_terms:
            raise NonConvergenceError(
                f"{what}: no convergence within {policy.max_terms} terms")
    return total


def _kummer_series(a: float, b: float, x: float, policy: SeriesPolicy) -> float:
    def terms():
        t = 1.0
        k = 0
        while True:
            yield t
            t *= (a + k) * x / ((b + k) * (k + 1))
            k += 1
    return _sum_with_policy(terms(), policy, "1F1 series")


def kummer_1f1(a: float, b: float, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Confluent hypergeometric 1F1(a; b; x).

    Negative arguments are routed through the Kummer transform
    1F1(a;b;x) = e^x 1F1(b-a;b;-x) so the series that is actually summed
    has a nonnegative argument; for large positive x the transform is used
    only when it terminates (b - a a nonpositive integer), since otherwise
    it trades a stable all-positive series for a catastrophically
    cancelling one.
    """
    if _is_nonpositive_integer(b):
        raise ValueError(f"1F1 undefined for nonpositive integer b={b}")
    if x < 0:
        return math.exp(x) * _kummer_series(b - a, b, -x, policy)
    if x > _KUMMER_TRANSFORM_X and _is_nonpositive_integer(b - a):
        return math.exp(x) * _kummer_series(b - a, b, -x, policy)
    return _kummer_series(a, b, x, policy)


def _kummer_series_ln_scalar(a: float, b: float, x: float, policy: SeriesPolicy) -> float:
    """ln 1F1(a;b;x) for a, b > 0 and x >= 0 (all-positive series, rescaled
    whenever the running sum approaches double overflow)."""
    total, term, offset = 1.0, 1.0, 0.0
    small = 0
    for k in range(policy.max_terms):
        term *= (a + k) * x / ((b + k) * (k + 1))
        total += term
        if total > 1e280:
            total *= 1e-280
            term *= 1e-280
            offset += 280.0 * math.log(10.0)
        if term <= policy.rel_tolerance * total:
            small += 1
            if small >= policy.consecutive_small_terms:
                return offset + math.log(total)
        else:
            small = 0
    raise NonConvergenceError(
        f"1F1 log-series: no convergence within {policy.max_terms} terms")


def kummer_1f1_ln(a: float, b: float, x: float,
                  policy: SeriesPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """(sign, ln|.|) of 1F1(a; b; x); exact in log space for a, b > 0, x >= 0."""
    if _is_nonpositive_integer(b):
        raise ValueError(f"1F1 undefined for nonpositive integer b={b}")
    if a > 0 and b > 0 and x >= 0:
        return 1.0, _kummer_series_ln_scalar(a, b, x, policy)
    v = kummer_1f1(a, b, x, policy)
    if v == 0.0:
        return 0.0, NEG_INF
    return math.copysign(1.0, v), math.log(abs(v))


def kummer_1f1_ln_grid(a: float, b: float, xs: np.ndarray,
                       policy: SeriesPolicy = DEFAULT_POLICY) -> np.ndarray:
    """ln 1F1(a; b; x) over an array of x >= 0, for a > 0, b > 0.

    All series terms are positive, so the sum is accumulated with
    ``logaddexp`` and never overflows.
    """
    xs = np.asarray(xs, dtype=float)
    if not (a > 0 and b > 0):
        raise ValueError("kummer_1f1_ln_grid requires a > 0 and b > 0")
    if np.any(xs < 0):
        raise ValueError("kummer_1f1_ln_grid requires x >= 0")
    with np.errstate(divide="ignore"):
        ln_x = np.log(xs)
    ln_term = np.zeros_like(xs)
    ln_total = np.zeros_like(xs)
    small = 0
    for k in range(policy.max_terms):
        ln_term = ln_term + math.log((a + k) / ((b + k) * (k + 1))) + ln_x
        ln_total = np.logaddexp(ln_total, ln_term)
        if np.all(ln_term - ln_total < math.log(policy.rel_tolerance)):
            small += 1
            if small >= policy.consecutive_small_terms:
                return ln_total
        else:
            small = 0
    raise NonConvergenceError(
        f"1F1 log-series: no convergence within {policy.max_terms} terms")


def gauss_2f1(a: float, b: float, c: float, x: float,
              policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Gauss hypergeometric 2F1(a, b; c; x) for |x| < 1."""
    if not abs(x) < 1:
        raise ValueError(f"2F1 series requires |x| < 1, got x={x}")
    if _is_nonpositive_integer(c):
        raise ValueError(f"2F1 undefined for nonpositive integer c={c}")

    def terms():
        t = 1.0
        k = 0
        while True:
            yield t
            t *= (a + k) * (b + k) * x / ((c + k) * (k + 1))
            k += 1
    return _sum_with_policy(terms(), policy, "2F1 series")


def gauss_2f1_ln(a: float, b: float, c: float, x: float,
                 policy: SeriesPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """(sign, ln|.|) of 2F1(a, b; c; x); log-exact for positive parameters and 0 <= x < 1."""
    if not abs(x) < 1:
        raise ValueError(f"2F1 series requires |x| < 1, got x={x}")
    if _is_nonpositive_integer(c):
        raise ValueError(f"2F1 undefined for nonpositive integer c={c}")
    if a > 0 and b > 0 and c > 0 and 0 <= x < 1:
        ln_total = 0.0
        ln_term = 0.0
        ln_x = math.log(x) if x > 0 else NEG_INF
        small = 0
        for k in range(policy.max_terms):
            ln_term += math.log((a + k) * (b + k) / ((c + k) * (k + 1))) + ln_x
            ln_total = float(np.logaddexp(ln_total, ln_term))
            if ln_term - ln_total < math.log(policy.rel_tolerance):
                small += 1
                if small >= policy.consecutive_small_terms:
                    return 1.0, ln_total
            else:
                small = 0
        raise NonConvergenceError(
            f"2F1 log-series: no convergence within {policy.max_terms} terms")
    v = gauss_2f1(a, b, c, x, policy)
    if v == 0.0:
        return 0.0, NEG_INF
    return math.copysign(1.0, v), math.log(abs(v))


# ---------------------------------------------------------------------------
# Humbert Phi1
# ---------------------------------------------------------------------------
#
# Convention (fixed by the reduction identities, see tests):
#   Phi1(a, b, c; x, y) = sum_{r,s} (a)_{r+s} (b)_s / ((c)_{r+s} r! s!) y^r x^s
# so that Phi1(a,b,c;x,0) = 2F1(a,b;c;x) and Phi1(a,b,c;0,y) = 1F1(a;c;y).
# The b parameter pairs with the bounded variable x in [0, 1); y is the
# confluent variable and may be arbitrarily large.


def _phi1_domain_check(x: float, y: float) -> None:
    if not 0 <= x < 1:
        raise ValueError(f"Phi1 requires 0 <= x < 1, got x={x}")
    if y < 0:
        raise ValueError(f"Phi1 requires y >= 0, got y={y}")


def _phi1_series(a: float, b: float, c: float, x: float, y: float,
                 policy: SeriesPolicy) -> float:
    # column sum over s: (a)_s (b)_s / ((c)_s s!) x^s * 1F1(a+s; c+s; y)
    def terms():
        coef = 1.0
        s = 0
        while True:
            yield coef * _kummer_series(a + s, c + s, y, policy)
            coef *= (a + s) * (b + s) * x / ((c + s) * (s + 1))
            s += 1
    return _sum_with_policy(terms(), policy, "Phi1 series")


def _phi1_series_ln(a: float, b: float, c: float, x: float, y: float,
                    policy: SeriesPolicy) -> float:
    # positive-parameter log-space version of the same column sum
    ln_x = math.log(x) if x > 0 else NEG_INF
    ln_coef = 0.0
    total_s, total_l = 0.0, NEG_INF
    small = 0
    for s in range(policy.max_terms):
        _, ln_f = kummer_1f1_ln(a + s, c + s, y, policy)
        total_s, total_l = signed_log_add(total_s, total_l, 1.0, ln_coef + ln_f)
        if ln_coef + ln_f - total_l < math.log(policy.rel_tolerance):
            small += 1
            if small >= policy.consecutive_small_terms:
                return total_l
        else:
            small = 0
        ln_coef += math.log((a + s) * (b + s) / ((c + s) * (s + 1))) + ln_x
    raise NonConvergenceError(
        f"Phi1 log-series: no convergence within {policy.max_terms} terms")


def _phi1_integral_ln(a: float, b: float, c: float, x: float, y: float) -> float:
    """ln Phi1 via the Euler-type integral, valid for c > a > 0:

    Phi1 = Gamma(c)/(Gamma(a)Gamma(c-a)) int_0^1 t^(a-1)(1-t)^(c-a-1)(1-xt)^(-b) e^(yt) dt.

    Evaluated as e^y times an integral of e^{-y(1-t)} * kernel, which is
    well conditioned for arbitrarily large y.
    """
    def ln_kernel(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return ((a - 1) * np.log(t) + (c - a - 1) * np.log1p(-t)
                    - b * np.log1p(-x * t) - y * (1.0 - t))
    # probe for the max exponent to scale the integrand
    tp = 1.0 - np.geomspace(1e-14, 1.0, 200)
    lk = ln_kernel(tp)
    lk_max = float(np.max(lk[np.isfinite(lk)]))
    val, _ = integrate.quad(lambda t: math.exp(min(ln_kernel(t) - lk_max, 700.0)),
                            0.0, 1.0, epsabs=1e-14, epsrel=1e-11, limit=200)
    if val <= 0:
        return NEG_INF
    return (math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a)
            + y + lk_max + math.log(val))


def humbert_phi1(a: float, b: float, c: float, x: float, y: float,
                 policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Humbert confluent hypergeometric function of two variables Phi1."""
    if _is_nonpositive_integer(c):
        raise ValueError(f"Phi1 undefined for nonpositive integer c={c}")
    _phi1_domain_check(x, y)
    if y <= _PHI1_SERIES_MAX_Y and x <= _PHI1_SERIES_MAX_X:
        return _phi1_series(a, b, c, x, y, policy)
    if c > a > 0:
        return math.exp(_phi1_integral_ln(a, b, c, x, y))
    # outside the integral representation's validity; the log-space series
    # still sums stably (positive terms) as long as exp() of single 1F1
    # factors stays representable
    if a > 0 and b > 0 and c > 0:
        return math.exp(_phi1_series_ln(a, b, c, x, y, policy))
    return _phi1_series(a, b, c, x, y, policy)


def humbert_phi1_ln(a: float, b: float, c: float, x: float, y: float,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """ln Phi1 for positive parameters (value is positive there)."""
    if not (a > 0 and b > 0 and c > 0):
        raise ValueError("humbert_phi1_ln requires positive a, b, c")
    _phi1_domain_check(x, y)
    if y <= _PHI1_SERIES_MAX_Y and x <= _PHI1_SERIES_MAX_X:
        return _phi1_series_ln(a, b, c, x, y, policy)
    if c > a:
        return _phi1_integral_ln(a, b, c, x, y)
    return _phi1_series_ln(a, b, c, x, y, policy)


def phi1_ln_grid(a: float, bs: np.ndarray, c: float, x: float,
                 ys: np.ndarray) -> np.ndarray:
    """ln Phi1(a, b, c; x, y) over a grid of b values and y values at once.

    Shared fixed quadrature nodes make this the fast path for the
    closed-form CDF kernel, where the same (a, c, x) recurs for every
    column/k-term entry and only b and y vary.  Requires c > a > 0 and
    y >= 0.  Returns an array of shape (len(bs), len(ys)).

    Node layout: panels geometric towards t=1 resolve e^{-y(1-t)} for all
    y in the grid; the two end panels use Gauss-Jacobi rules so algebraic
    endpoint singularities t^(a-1), (1-t)^(c-a-1) are integrated exactly.
    """
    bs = np.atleast_1d(np.asarray(bs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    if not c > a > 0:
        raise ValueError("phi1_ln_grid requires c > a > 0")
    if np.any(ys < 0):
        raise ValueError("phi1_ln_grid requires y >= 0")
    ymax = float(np.max(ys)) if ys.size else 0.0
    K = max(10, int(math.ceil(math.log2(max(ymax, 1.0) * 32.0))))
    nq = 24
    alpha = c - a - 1.0  # exponent of (1-t) at t=1
    beta = a - 1.0       # exponent of t at t=0

    nodes = []
    weights = []  # weights including the full kernel-singularity factors

    # first panel [0, 1/2]: Gauss-Jacobi absorbing t^(a-1); map t = (1+xi)/4
    xg, wg = sp.roots_jacobi(nq, 0.0, beta)
    t = (1.0 + xg) / 4.0
    nodes.append(t)
    weights.append(wg * 0.25 ** (beta + 1.0) * (1.0 - t) ** alpha)

    # middle panels [1 - 2^-q, 1 - 2^-(q+1)], q = 1..K-1: plain Gauss-Legendre
    xl, wl = sp.roots_legendre(nq)
    for q in range(1, K):
        lo = 1.0 - 2.0 ** (-q)
        hi = 1.0 - 2.0 ** (-(q + 1))
        half = (hi - lo) / 2.0
        t = lo + half * (xl + 1.0)
        w = wl * half * t ** beta * (1.0 - t) ** alpha
        nodes.append(t)
        weights.append(w)

    # last panel [1 - 2^-K, 1]: Gauss-Jacobi absorbing (1-t)^(c-a-1);
    # map 1 - t = (1-xi) h/2
    xg, wg = sp.roots_jacobi(nq, alpha, 0.0)
    h = 2.0 ** (-K)
    t = 1.0 - (1.0 - xg) * h / 2.0
    nodes.append(t)
    weights.append(wg * (h / 2.0) ** (alpha + 1.0) * t ** beta)

    t_all = np.concatenate(nodes)
    ln_w = np.log(np.concatenate(weights))
    ln_smooth = -np.outer(ys, 1.0 - t_all)  # (ny, nt)
    ln_onemxt = np.log1p(-x * t_all)
    ln_norm = math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a)
    out = np.empty((bs.size, ys.size))
    for ib, b in enumerate(bs):
        expo = ln_smooth + (ln_w - b * ln_onemxt)[None, :]
        mx = np.max(expo, axis=1, keepdims=True)
        out[ib] = (ln_norm + ys + mx[:, 0]
                   + np.log(np.sum(np.exp(expo - mx), axis=1)))
    return out
