"""Integer primitives: sieves, factorization, Kronecker symbol, Euler phi."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, ResourceError

MAX_INPUT = 1 << 62


@dataclass(frozen=True)
class SpfTable:
    """Smallest-prime-factor lookup for 2..limit (entries 0 and 1 are 0)."""

    limit: int
    spf: np.ndarray

    def __getitem__(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise DomainError(f"{n} outside SPF table range [2, {self.limit}]")
        return int(self.spf[n])


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def radical(self) -> int:
        return math.prod(self.primes)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array ``s`` of length limit+1 with ``s[n]`` True iff n is prime."""
    s = np.ones(max(limit, 1) + 1, dtype=bool)
    s[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if s[i]:
            s[i * i :: i] = False
    return s


def primes_up_to(limit: int) -> np.ndarray:
    """Ascending int64 array of the primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(prime_sieve(int(limit))).astype(np.int64)


def prime_pi(x: int) -> int:
    return int(primes_up_to(int(x)).size)


def build_spf(limit: int) -> SpfTable:
    if limit < 2:
        raise DomainError("build_spf needs limit >= 2")
    dtype = np.int32 if limit < 2**31 else np.int64
    try:
        spf = np.zeros(limit + 1, dtype=dtype)
    except MemoryError as exc:
        raise ResourceError(f"cannot allocate SPF table of size {limit}") from exc
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    idx = idx[idx >= 2]
    spf[idx] = idx
    spf.setflags(write=False)
    return SpfTable(limit, spf)


def factorize(n: int, table: Optional[SpfTable] = None) -> Factorization:
    """Canonical prime-power factorization of ``n``.

    With a table the cost is O(log n) lookups; otherwise trial division up to sqrt(n).
    """
    n = int(n)
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    if n > MAX_INPUT:
        raise DomainError(f"{n} exceeds the supported range 2^62")
    factors: list[tuple[int, int]] = []
    if table is not None:
        if n > table.limit:
            raise DomainError(f"{n} exceeds SPF table limit {table.limit}")
        spf = table.spf
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        return Factorization(n, tuple(factors))

    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    # wheel mod 6
    d, step = 5, 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            factors.append((d, e))
        d += step
        step = 6 - step
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factorize(n)
    return f.factors == ((n, 1),)


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a|b) for arbitrary integers a, b.

    Follows Cohen, Algorithm 1.4.10. For b = 0 the value is 1 when |a| = 1
    and 0 otherwise.
    """
    a, b = int(a), int(b)
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    k = 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -1
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    # b is now odd and positive: Jacobi symbol loop
    a %= b
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                k = -k
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a %= b
    return k if b == 1 else 0


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def quadratic_character(p: int) -> np.ndarray:
    """Legendre symbol table ``chi[r] = (r|p)`` for r in [0, p) and odd prime p."""
    chi = -np.ones(p, dtype=np.int64)
    chi[0] = 0
    r = np.arange(1, p, dtype=np.int64)
    chi[(r * r) % p] = 1
    return chi
