"""Chunked evaluation over [1, x] with order-fixed reduction.

The range is cut into fixed-size chunks.  Chunks may run in a process
pool, but results are always consumed in ascending chunk order, so the
outcome depends on the chunk size only, never on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Optional, Sequence

DEFAULT_CHUNK = 65536
MIN_CHUNK = 10_000


def default_workers() -> int:
    env = os.environ.get("KSTARLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def chunk_ranges(x: int, chunk: int, start: int = 1) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, x + 1)) for lo in range(start, x + 1, chunk)]


def map_chunks(
    task: Callable,
    ranges: Sequence[tuple[int, int]],
    args: tuple = (),
    workers: Optional[int] = None,
) -> Iterator:
    """Yield ``task(lo, hi, *args)`` for each range, in range order."""
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(ranges) <= 1:
        for lo, hi in ranges:
            yield task(lo, hi, *args)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task, lo, hi, *args) for lo, hi in ranges]
        for fut in futures:
            yield fut.result()


class Neumaier:
    """Compensated accumulator (TwoSum per addition)."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, v: float):
        t = self.s + v
        if abs(self.s) >= abs(v):
            self.c += (self.s - t) + v
        else:
            self.c += (v - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def decade_points(x: int) -> list[int]:
    """Powers of ten from 10 up to x."""
    out, d = [], 10
    while d <= x:
        out.append(d)
        d *= 10
    return out
