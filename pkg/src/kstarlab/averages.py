"""Sieved partial sums of K*, K, F(p-1) and K° with reproducible reduction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from . import batch
from .constants import DEFAULT_TRUNCATION, named_constant
from .errors import DomainError, ResourceError
from .reduce import DEFAULT_CHUNK, MIN_CHUNK, Neumaier, chunk_ranges, decade_points, map_chunks

MAX_X = 10**9


class Mode(str, Enum):
    ALL = "ALL"
    ODD = "ODD"
    EVEN = "EVEN"
    PRIME_KSTAR = "PRIME_KSTAR"
    PRIME_K = "PRIME_K"
    F_SHIFTED = "F_SHIFTED"
    KCIRC = "KCIRC"

    @classmethod
    def parse(cls, text) -> "Mode":
        if isinstance(text, cls):
            return text
        return cls(str(text).upper().replace("-", "_"))


@dataclass
class PartialSumReport:
    mode: str
    x: int
    terms: int
    sum: float
    mean: float
    reference: float
    deviation: float
    decades: list = field(default_factory=list)
    chunk: int = DEFAULT_CHUNK
    power: int = 1
    reference_label: str = ""
    c2: float = 0.0
    c2_tail_bound: float = 0.0


@dataclass(frozen=True)
class RunConstants:
    c2: float
    c2_tail: float
    k_at_1: float
    prime_mean: float
    j: float

    @classmethod
    def at(cls, truncation_prime: int = DEFAULT_TRUNCATION) -> "RunConstants":
        c2 = named_constant("C2", truncation_prime)
        return cls(
            c2.value,
            c2.tail_bound,
            named_constant("K_AT_1", truncation_prime).value,
            named_constant("PRIME_MEAN", truncation_prime).value,
            named_constant("J", truncation_prime).value,
        )


def _reference(mode: Mode, rc: RunConstants) -> tuple[float, str]:
    return {
        Mode.ALL: (1.0, "mean of K*(N) over all N"),
        Mode.ODD: (2.0 / 3.0, "mean of K*(N) over odd N"),
        Mode.EVEN: (4.0 / 3.0, "mean of K*(N) over even N"),
        Mode.PRIME_KSTAR: (rc.prime_mean, "(2/3) C2 J"),
        Mode.PRIME_K: (rc.prime_mean, "(2/3) C2 J"),
        Mode.F_SHIFTED: (rc.j, "J"),
        Mode.KCIRC: (1.0, "conjectural/diagnostic"),
    }[mode]


def block_values(lo: int, hi: int, mode: Mode, c2: float, k_at_1: float) -> tuple[np.ndarray, np.ndarray]:
    """(n, value) for the members of ``mode``'s index set in [lo, hi)."""
    b = batch.k_block(lo, hi, c2, k_at_1, circ=mode is Mode.KCIRC)
    if mode is Mode.ALL:
        return b.n, b.k_star
    if mode is Mode.ODD:
        m = b.n % 2 == 1
        return b.n[m], b.k_star[m]
    if mode is Mode.EVEN:
        m = b.n % 2 == 0
        return b.n[m], b.k_star[m]
    if mode is Mode.KCIRC:
        m = b.n >= 2
        return b.n[m], b.k_circ[m]
    m = b.is_prime
    vals = {Mode.PRIME_KSTAR: b.k_star, Mode.PRIME_K: b.k, Mode.F_SHIFTED: b.f_shift}[mode]
    return b.n[m], vals[m]


def _sum_task(lo, hi, mode, power, c2, k_at_1, cuts):
    """Per-chunk partial sums, split at the decade points inside the chunk."""
    n, v = block_values(lo, hi, mode, c2, k_at_1)
    if power != 1:
        v = v**power
    out = []
    start = 0
    for end in [c for c in cuts if lo <= c < hi - 1] + [hi - 1]:
        stop = int(np.searchsorted(n, end, side="right"))
        seg = v[start:stop]
        out.append((end, math.fsum(seg.tolist()), int(seg.size)))
        start = stop
    return out


def _validate(x, chunk):
    if x < 2:
        raise DomainError("x must be >= 2")
    if x > MAX_X:
        raise ResourceError(f"x limited to {MAX_X}")
    if chunk < MIN_CHUNK:
        raise DomainError(f"chunk must be >= {MIN_CHUNK}")


def accumulate(mode, x, chunk=DEFAULT_CHUNK, workers=None, power=1, rc: Optional[RunConstants] = None):
    """Return (sum, terms, decades) for sum_{N <= x in mode} value^power."""
    mode = Mode.parse(mode)
    _validate(x, chunk)
    rc = rc or RunConstants.at()
    cuts = decade_points(x)
    acc = Neumaier()
    terms = 0
    decades = []
    results = map_chunks(_sum_task, chunk_ranges(x, chunk), (mode, power, rc.c2, rc.k_at_1, cuts), workers)
    for segs in results:
        for end, s, c in segs:
            acc.add(s)
            terms += c
            if end in cuts and terms:
                decades.append((end, acc.value / terms))
    return acc.value, terms, decades


def partial_sums(mode, x: int, chunk: int = DEFAULT_CHUNK, workers: Optional[int] = None,
                 rc: Optional[RunConstants] = None) -> PartialSumReport:
    mode = Mode.parse(mode)
    rc = rc or RunConstants.at()
    total, terms, decades = accumulate(mode, x, chunk, workers, 1, rc)
    if terms == 0:
        raise DomainError(f"empty index set for mode {mode.value} at x = {x}")
    ref, label = _reference(mode, rc)
    mean = total / terms
    return PartialSumReport(
        mode.value, x, terms, total, mean, ref, mean - ref,
        [list(d) for d in decades], chunk, 1, label, rc.c2, rc.c2_tail,
    )


def stream_kstar(x: int, chunk: int = DEFAULT_CHUNK, rc: Optional[RunConstants] = None) -> Iterator[tuple[int, float]]:
    """Yield (n, K*(n)) for n = 1..x in ascending order."""
    rc = rc or RunConstants.at()
    for lo, hi in chunk_ranges(x, chunk):
        b = batch.k_block(lo, hi, rc.c2, rc.k_at_1)
        yield from zip(b.n.tolist(), b.k_star.tolist())
