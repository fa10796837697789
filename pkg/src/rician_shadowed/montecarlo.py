"""Monte-Carlo estimation and goodness-of-fit machinery.

Sampling is chunked with a fixed block size and per-chunk child seeds
spawned from the master seed, so the merged sample multiset depends only on
(seed, N) and never on how many workers executed the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ModelParams, ScaledIdentityParams
from .sampling import gram, sample_channel, sample_max_eigenvalues

_CHUNK = 20_000


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted sample set with its count."""

    sorted_samples: np.ndarray
    count: int

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        arr = np.sort(np.asarray(samples, dtype=float).ravel())
        if arr.size == 0:
            raise ValueError("at least one sample required")
        return cls(sorted_samples=arr, count=int(arr.size))


def empirical_cdf(dist: EmpiricalDistribution, x: float) -> float:
    """Right-continuous empirical CDF: fraction of samples <= x."""
    return float(np.searchsorted(dist.sorted_samples, x, side="right")) / dist.count


def ks_statistic(dist: EmpiricalDistribution, cdf: Callable) -> float:
    """Kolmogorov-Smirnov sup-distance against an analytic CDF.

    Both one-sided gaps are evaluated at the sample points, where the sup
    of |F_N - F| is attained.
    """
    xs = dist.sorted_samples
    n = dist.count
    try:
        f = np.asarray(cdf(xs), dtype=float)
        if f.shape != xs.shape:
            raise TypeError
    except TypeError:
        f = np.array([float(cdf(float(x))) for x in xs])
    i = np.arange(1, n + 1, dtype=float)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1.0) / n))
    return max(d_plus, d_minus, 0.0)


def ks_two_sample(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """Two-sample KS sup-distance."""
    grid = np.concatenate([a.sorted_samples, b.sorted_samples])
    fa = np.searchsorted(a.sorted_samples, grid, side="right") / a.count
    fb = np.searchsorted(b.sorted_samples, grid, side="right") / b.count
    return float(np.max(np.abs(fa - fb)))


def _chunk_counts(total: int, chunk: int = _CHUNK) -> list[int]:
    full, rem = divmod(total, chunk)
    return [chunk] * full + ([rem] if rem else [])


def _run_chunks(fn: Callable, counts: list[int], seed, n_workers: int) -> np.ndarray:
    seqs = np.random.SeedSequence(seed).spawn(len(counts))
    jobs = list(zip(counts, seqs))
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            parts = list(ex.map(lambda job: fn(job[0], np.random.default_rng(job[1])), jobs))
    else:
        parts = [fn(c, np.random.default_rng(s)) for c, s in jobs]
    return np.concatenate(parts)


def estimate_max_eig_samples(params: ModelParams | ScaledIdentityParams, n_samples: int,
                             seed, n_workers: int = 1) -> EmpiricalDistribution:
    """N independent draws of the largest Gram eigenvalue, seed-deterministic."""
    if n_samples < 1:
        raise ValueError("n_samples >= 1 required")
    if isinstance(params, ScaledIdentityParams):
        params = params.to_model_params()
    vals = _run_chunks(lambda c, rng: sample_max_eigenvalues(params, c, rng),
                       _chunk_counts(n_samples), seed, n_workers)
    return EmpiricalDistribution.from_samples(vals)


def estimate_mgf(params: ModelParams | ScaledIdentityParams, s, n_samples: int,
                 seed, n_workers: int = 1) -> tuple[float, float]:
    """Monte-Carlo mean and standard error of etr(Y S)."""
    if n_samples < 1:
        raise ValueError("n_samples >= 1 required")
    if isinstance(params, ScaledIdentityParams):
        params = params.to_model_params()
    s = np.asarray(s, dtype=complex)
    si = np.linalg.inv(params.Sigma)
    if float(np.linalg.eigvalsh(si - s)[0]) <= 0.0:
        raise ValueError("MGF domain requires -S + Sigma^-1 positive definite")

    def chunk(c, rng):
        y = gram(sample_channel(params, rng, size=c))
        tr = np.trace(y @ s, axis1=-2, axis2=-1).real
        return np.exp(tr)

    vals = _run_chunks(chunk, _chunk_counts(n_samples), seed, n_workers)
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    return mean, stderr


@dataclass(frozen=True)
class HistogramEstimate:
    """Density histogram with per-bin standard errors."""

    bin_edges: np.ndarray
    densities: np.ndarray
    std_errors: np.ndarray

    @classmethod
    def from_samples(cls, samples, max_bins: int = 100) -> "HistogramEstimate":
        arr = np.asarray(samples, dtype=float).ravel()
        n = arr.size
        if n < 2:
            raise ValueError("need at least two samples")
        q75, q25 = np.percentile(arr, [75, 25])
        iqr = q75 - q25
        width = 2.0 * iqr / n ** (1.0 / 3.0) if iqr > 0 else 0.0
        span = float(arr.max() - arr.min())
        if width <= 0 or span <= 0:
            nbins = 1
        else:
            nbins = min(max_bins, max(1, int(math.ceil(span / width))))
        counts, edges = np.histogram(arr, bins=nbins)
        widths = np.diff(edges)
        p_hat = counts / n
        dens = p_hat / widths
        se = np.sqrt(p_hat * (1.0 - p_hat) / n) / widths
        return cls(bin_edges=edges, densities=dens, std_errors=se)

    def total_mass(self) -> float:
        return float(np.sum(self.densities * np.diff(self.bin_edges)))
