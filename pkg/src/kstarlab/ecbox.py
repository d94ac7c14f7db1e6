"""Brute-force point counts on y^2 = x^3 + a x + b and box averages of M_E(N)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import primes_up_to, quadratic_character, factorize
from .errors import DomainError, ResourceError
from .kfun import k_exact

BOX_BUDGET = 10**7


@dataclass(frozen=True)
class CurveSpec:
    a: int
    b: int

    def __post_init__(self):
        if self.disc_factor == 0:
            raise DomainError(f"singular curve: 4a^3 + 27b^2 = 0 for (a, b) = ({self.a}, {self.b})")

    @property
    def disc_factor(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def good_at(self, p: int) -> bool:
        return p >= 5 and self.disc_factor % p != 0


@dataclass
class BoxReport:
    N: int
    A: int
    B: int
    curve_count: int
    avg_me: float
    prediction: float
    ratio: float


@lru_cache(maxsize=4096)
def _chi(p: int) -> np.ndarray:
    return quadratic_character(p)


def point_count(c: CurveSpec, p: int) -> int:
    """#E(F_p) including the point at infinity."""
    if not c.good_at(p):
        raise DomainError(f"p = {p} is not a prime of good reduction for {c}")
    x = np.arange(p, dtype=np.int64)
    f = (x * x % p * x + c.a * x + c.b) % p
    return p + 1 + int(_chi(p)[f].sum())


def naive_point_count(c: CurveSpec, p: int) -> int:
    """Count affine solutions by trying every (x, y); test oracle."""
    sq = {}
    for y in range(p):
        sq[y * y % p] = sq.get(y * y % p, 0) + 1
    return 1 + sum(sq.get((x**3 + c.a * x + c.b) % p, 0) for x in range(p))


def hasse_window(N: int) -> list[int]:
    """Primes p with (sqrt N - 1)^2 < p < (sqrt N + 1)^2, tested in integers."""
    r = math.isqrt(N)
    lo = max(2, N + 1 - 2 * r - 2)
    hi = N + 2 * r + 3
    ps = primes_up_to(hi)
    # p prime is never a square, so the boundary cannot be hit exactly
    return [int(p) for p in ps[ps >= lo] if (p + 1 - N) ** 2 < 4 * p]


def m_e(c: CurveSpec, N: int, table=None) -> int:
    if N < 1:
        raise DomainError("N must be >= 1")
    return sum(1 for p in hasse_window(N) if c.good_at(p) and point_count(c, p) == N)


def _count_table(p: int) -> np.ndarray:
    """T[a, b] = #E_{a,b}(F_p) for all residues a, b (singular entries included)."""
    x = np.arange(p, dtype=np.int64)
    a = np.arange(p, dtype=np.int64)[:, None]
    cube = x * x % p * x % p
    lin = (a * x[None, :]) % p  # a x
    chi = _chi(p)
    out = np.empty((p, p), dtype=np.int64)
    for b in range(p):
        out[:, b] = p + 1 + chi[(cube[None, :] + lin + b) % p].sum(axis=1)
    return out


def _box(A: int, B: int):
    a = np.arange(-A, A + 1, dtype=np.int64)[:, None]
    b = np.arange(-B, B + 1, dtype=np.int64)[None, :]
    disc = 4 * a**3 + 27 * b**2
    return a, b, disc


def box_average(N: int, A: int, B: int, c2: Optional[float] = None, table=None) -> BoxReport:
    """Average of M_E(N) over all nonsingular (a, b) with |a| <= A, |b| <= B."""
    if N < 5 or A < 1 or B < 1:
        raise DomainError("box_average needs N >= 5 and A, B >= 1")
    if (2 * A + 1) * (2 * B + 1) > BOX_BUDGET:
        raise ResourceError("box exceeds the enumeration budget")
    if c2 is None:
        from .constants import named_constant

        c2 = named_constant("C2").value
    a, b, disc = _box(A, B)
    nonsing = disc != 0
    total = 0
    for p in hasse_window(N):
        if p < 5:
            continue
        T = _count_table(p)
        hit = (T[a % p, b % p] == N) & (disc % p != 0) & nonsing
        total += int(hit.sum())
    count = int(nonsing.sum())
    avg = total / count
    pred = k_exact(N, c2).k_star / math.log(N)
    return BoxReport(N, A, B, count, avg, pred, avg / pred)


def sum_me(c: CurveSpec, x: int) -> tuple[int, int]:
    """(sum_{N <= x} M_E(N), pi(x)) by binning point counts of good primes."""
    if x < 10:
        raise DomainError("x must be >= 10")
    bound = (math.isqrt(x) + 2) ** 2
    total = 0
    for p in primes_up_to(bound).tolist():
        if c.good_at(p) and point_count(c, p) <= x:
            total += 1
    return total, int(primes_up_to(x).size)


def sum_me_odd(c: CurveSpec, x: int) -> int:
    """sum over odd N <= x of M_E(N)."""
    bound = (math.isqrt(x) + 2) ** 2
    return sum(
        1 for p in primes_up_to(bound).tolist()
        if c.good_at(p) and (n := point_count(c, p)) <= x and n % 2
    )


def cubic_irreducible(a: int, b: int) -> bool:
    """X^3 + aX + b has no rational root (rational roots are integer divisors of b)."""
    if b == 0:
        return False
    divs = {1}
    for p, e in factorize(abs(b)).factors:
        divs = {d * p**i for d in divs for i in range(e + 1)}
    return not any(r**3 + a * r + b == 0 for d in divs for r in (d, -d))
