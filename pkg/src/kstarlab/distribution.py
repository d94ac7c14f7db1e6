"""Empirical distribution function and moments of K*."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .averages import Mode, RunConstants, accumulate, block_values
from .constants import named_constant
from .errors import DomainError
from .reduce import DEFAULT_CHUNK, chunk_ranges, map_chunks

EXACT_CDF_LIMIT = 10**5


@dataclass
class EmpiricalCdf:
    """Histogram of K*(N), N <= x, over half-open bins (lo, hi]."""

    x: int
    bin_edges: list
    counts: list
    total: int
    u0: float

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.counts) / self.total

    def mass_below(self, u: float) -> int:
        """Number of samples in bins lying entirely at or below ``u``."""
        edges = np.asarray(self.bin_edges)
        hi = edges[1:]
        return int(np.asarray(self.counts)[hi <= u].sum())


class MinReport(NamedTuple):
    n_min: int
    value: float
    small_odd_free: bool


def _minmax_task(lo, hi, c2, k_at_1):
    n, v = block_values(lo, hi, Mode.ALL, c2, k_at_1)
    i = int(np.argmin(v))
    return int(n[i]), float(v[i]), float(v.max())


def _hist_task(lo, hi, c2, k_at_1, edges):
    _, v = block_values(lo, hi, Mode.ALL, c2, k_at_1)
    idx = np.searchsorted(edges, v, side="left") - 1
    return np.bincount(idx, minlength=len(edges) - 1)


def _scan(x, chunk, workers, rc):
    n_min, vmin, vmax = 0, math.inf, -math.inf
    for n, lo_v, hi_v in map_chunks(_minmax_task, chunk_ranges(x, chunk), (rc.c2, rc.k_at_1), workers):
        if lo_v < vmin:
            n_min, vmin = n, lo_v
        vmax = max(vmax, hi_v)
    return n_min, vmin, vmax


def _odd_free(n: int, bound: int = 7) -> bool:
    return all(n * (n - 1) % p for p in (3, 5, 7) if p <= bound)


def min_kstar(x: int, chunk: int = DEFAULT_CHUNK, workers: Optional[int] = None,
              rc: Optional[RunConstants] = None) -> MinReport:
    if x < 2:
        raise DomainError("x must be >= 2")
    rc = rc or RunConstants.at()
    n, v, _ = _scan(x, chunk, workers, rc)
    return MinReport(n, v, _odd_free(n))


def empirical_cdf(x: int, bins: int, chunk: int = DEFAULT_CHUNK, workers: Optional[int] = None,
                  rc: Optional[RunConstants] = None) -> EmpiricalCdf:
    """Equal-width histogram of K* with u0 inserted as an extra edge."""
    if x < 10 or bins < 10:
        raise DomainError("empirical_cdf needs x >= 10 and bins >= 10")
    rc = rc or RunConstants.at()
    u0 = 2.0 / 3.0 * rc.c2
    _, vmin, vmax = _scan(x, chunk, workers, rc)
    delta = 1e-3 * (vmax - u0) + 1e-9
    edges = np.linspace(u0 - delta, vmax + delta, bins + 1)
    edges = np.unique(np.append(edges, u0))
    counts = np.zeros(len(edges) - 1, dtype=np.int64)
    for part in map_chunks(_hist_task, chunk_ranges(x, chunk), (rc.c2, rc.k_at_1, edges), workers):
        counts += part
    return EmpiricalCdf(x, edges.tolist(), counts.tolist(), int(counts.sum()), u0)


def cdf_query(c: EmpiricalCdf, u: float) -> float:
    """Cumulative fraction at the largest bin edge <= u."""
    edges = c.bin_edges
    if u < edges[0]:
        return 0.0
    if u >= edges[-1]:
        return 1.0
    j = int(np.searchsorted(edges, u, side="right")) - 1
    return float(np.sum(c.counts[:j])) / c.total


def exact_cdf_values(x: int, rc: Optional[RunConstants] = None) -> np.ndarray:
    """Sorted K*(N), N <= x; full-sample oracle for small x."""
    if x > EXACT_CDF_LIMIT:
        raise DomainError(f"exact CDF limited to x <= {EXACT_CDF_LIMIT}")
    rc = rc or RunConstants.at()
    _, v = block_values(1, x + 1, Mode.ALL, rc.c2, rc.k_at_1)
    return np.sort(v)


def empirical_moment(x: int, k: int, chunk: int = DEFAULT_CHUNK, workers: Optional[int] = None,
                     rc: Optional[RunConstants] = None) -> float:
    """(1/x) * sum_{N <= x} K*(N)^k."""
    if x < 2 or k < 1 or k > 16:
        raise DomainError("empirical_moment needs x >= 2 and 1 <= k <= 16")
    total, terms, _ = accumulate(Mode.ALL, x, chunk, workers, k, rc)
    return total / terms


def u0(truncation_prime: Optional[int] = None) -> float:
    r = named_constant("U0") if truncation_prime is None else named_constant("U0", truncation_prime)
    return r.value
