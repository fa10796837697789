"""Signed log-magnitude arithmetic.

Quantities like Pochhammer products, determinant entries and series terms
are carried as ``(sign, ln|value|)`` pairs so that intermediate magnitudes
far beyond double range survive.  ``sign == 0`` encodes an exact zero
(with ``ln = -inf``).
"""
from __future__ import annotations

import math

import numpy as np

NEG_INF = float("-inf")


def ln_to_value(sign: float, ln_mag: float) -> float:
    """Collapse a signed log pair to a float (inf on overflow)."""
    if sign == 0 or ln_mag == NEG_INF:
        return 0.0
    if ln_mag > 709.0:
        return math.inf if sign > 0 else -math.inf
    return sign * math.exp(ln_mag)


def signed_log_add(s1: float, l1: float, s2: float, l2: float) -> tuple[float, float]:
    """(sign, ln) of s1*e^l1 + s2*e^l2."""
    if s1 == 0:
        return s2, l2
    if s2 == 0:
        return s1, l1
    if l1 < l2:
        s1, l1, s2, l2 = s2, l2, s1, l1
    if s1 == s2:
        return s1, l1 + math.log1p(math.exp(l2 - l1))
    d = l2 - l1
    if d == 0.0:
        return 0.0, NEG_INF
    return s1, l1 + math.log1p(-math.exp(d))


def signed_log_sum(signs: np.ndarray, ln_mags: np.ndarray) -> tuple[float, float]:
    """(sign, ln) of sum(signs * exp(ln_mags)) with a max-shift."""
    signs = np.asarray(signs, dtype=float)
    ln_mags = np.asarray(ln_mags, dtype=float)
    live = signs != 0
    if not live.any():
        return 0.0, NEG_INF
    m = float(np.max(ln_mags[live]))
    if m == NEG_INF:
        return 0.0, NEG_INF
    acc = float(np.sum(signs[live] * np.exp(ln_mags[live] - m)))
    if acc == 0.0:
        return 0.0, NEG_INF
    return math.copysign(1.0, acc), m + math.log(abs(acc))
