"""Configurations of N modulo small primes, in exact rational arithmetic.

A configuration records, for every prime l <= z, whether l divides N
(set B, with the exact exponent), divides N - 1 (set C), or neither (set
A).  All densities and weights are :class:`fractions.Fraction` so the
partition identity is checked by equality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import primes_up_to
from .errors import DomainError, ResourceError

MAX_Z = 13
MAX_GL2_PRIME = 13
MAX_LITERAL_CONFIGS = 2_000_000
M_SIGMA_CAP = 1 << 62


@dataclass(frozen=True)
class Configuration:
    z: float
    setA: tuple[int, ...]
    setB: tuple[int, ...]
    setC: tuple[int, ...]
    exponents: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        primes = _primes(self.z)
        got = sorted(self.setA + self.setB + self.setC)
        if got != list(primes):
            raise DomainError("sets A, B, C must partition the primes <= z")
        if tuple(sorted(l for l, _ in self.exponents)) != tuple(sorted(self.setB)):
            raise DomainError("exponents must be given exactly on set B")
        if any(e < 1 for _, e in self.exponents):
            raise DomainError("exponents must be >= 1")

    @property
    def e(self) -> dict[int, int]:
        return dict(self.exponents)


def make_configuration(z, A=(), B=None, C=()) -> Configuration:
    """Build a configuration; ``B`` maps prime -> exponent."""
    B = dict(B or {})
    return Configuration(z, tuple(sorted(A)), tuple(sorted(B)), tuple(sorted(C)), tuple(sorted(B.items())))


@lru_cache(maxsize=None)
def _primes(z) -> tuple[int, ...]:
    if z < 2:
        return ()
    return tuple(primes_up_to(int(z)).tolist())


def _nu(n: int, l: int) -> int:
    e = 0
    while n % l == 0:
        n //= l
        e += 1
    return e


def sigma_of(n: int, z: float, table=None) -> Configuration:
    if n <= 1:
        raise DomainError("sigma_of needs n >= 2")
    A, B, C = [], {}, []
    for l in _primes(z):
        if n % l == 0:
            B[l] = _nu(n, l)
        elif (n - 1) % l == 0:
            C.append(l)
        else:
            A.append(l)
    return make_configuration(z, A, B, C)


def d_sigma(s: Configuration) -> Fraction:
    """Natural density of the integers with configuration ``s``."""
    out = Fraction(1)
    for l in s.setA:
        out *= 1 - Fraction(2, l)
    for l, e in s.exponents:
        out *= Fraction(1, l**e) * (1 - Fraction(1, l))
    for l in s.setC:
        out *= Fraction(1, l)
    return out


def m_sigma(s: Configuration) -> int:
    m = math.prod(s.setA) * math.prod(s.setC)
    for l, e in s.exponents:
        m *= l ** (e + 1)
    if m > M_SIGMA_CAP:
        raise ResourceError("m_sigma exceeds 2^62; lower z or the exponents")
    return m


def kzrz_of_sigma(s: Configuration) -> Fraction:
    """K_z(sigma) * R_z(sigma) as an exact rational."""
    out = Fraction(1)
    for l in s.setA:
        out *= 1 - Fraction(1, (l - 1) ** 2)
    for l, e in s.exponents:
        out *= (1 - Fraction(1, l**e * (l - 1))) / (1 - Fraction(1, l))
    for l in s.setC:
        out *= 1 - Fraction(1, (l - 1) ** 2 * (l + 1))
    return out


def weighted_term(s: Configuration) -> Fraction:
    """K_z R_z d for one configuration, from the expanded product form."""
    out = Fraction(1)
    for l in s.setA:
        out *= Fraction(l - 2, l - 1) ** 2
    for l, e in s.exponents:
        out *= Fraction(1, l**e) * (1 - Fraction(1, l**e * (l - 1)))
    for l in s.setC:
        out *= Fraction(l * l - l - 1, (l - 1) ** 2 * (l + 1))
    return out


def p_b_closed(l: int, k: int) -> Fraction:
    """Weight of set B at prime l for the k-th moment, summed over all exponents.

    Expanding (1 - l^-d/(l-1))^k binomially turns the sum over d into
    geometric series: sum_d l^(-d(j+1)) = 1/(l^(j+1) - 1).
    """
    s = Fraction(0)
    for j in range(k + 1):
        s += Fraction((-1) ** j * math.comb(k, j), (l - 1) ** j * (l ** (j + 1) - 1))
    return (1 - Fraction(1, l)) ** (1 - k) * s


def p_split(l: int, k: int = 1) -> tuple[Fraction, Fraction, Fraction]:
    """(P_A, P_B, P_C) at prime l for the k-th moment."""
    if k < 1:
        raise DomainError("k must be >= 1")
    pa = Fraction(l - 2, l) ** (k + 1) * Fraction(l, l - 1) ** (2 * k)
    pc = Fraction(1, l) * (1 - Fraction(1, (l - 1) ** 2 * (l + 1))) ** k
    return pa, p_b_closed(l, k), pc


def _check_z(z):
    if z > MAX_Z:
        raise ResourceError(f"configuration enumeration limited to z <= {MAX_Z}")


def _partitions(primes, fixed=None):
    """Yield (A, B, C) label tuples, one label per prime, in canonical order."""
    for labels in itertools.product("ABC", repeat=len(primes)):
        if fixed and any(labels[primes.index(l)] != lab for l, lab in fixed.items()):
            continue
        yield labels


def _identity(z, k, e_max, fixed) -> Fraction:
    _check_z(z)
    primes = list(_primes(z))
    splits = {l: p_split(l, k) for l in primes}
    total = Fraction(0)
    if e_max is None:
        for labels in _partitions(primes, fixed):
            term = Fraction(1)
            for l, lab in zip(primes, labels):
                term *= splits[l]["ABC".index(lab)]
            total += term
        return total

    if e_max < 1:
        raise DomainError("e_max must be >= 1")
    count = sum(
        e_max ** labels.count("B") for labels in _partitions(primes, fixed)
    )
    if count > MAX_LITERAL_CONFIGS:
        raise ResourceError(f"{count} configurations exceed the literal enumeration budget")
    for labels in _partitions(primes, fixed):
        A = [l for l, lab in zip(primes, labels) if lab == "A"]
        B = [l for l, lab in zip(primes, labels) if lab == "B"]
        C = [l for l, lab in zip(primes, labels) if lab == "C"]
        for es in itertools.product(range(1, e_max + 1), repeat=len(B)):
            s = make_configuration(z, A, dict(zip(B, es)), C)
            total += (kzrz_of_sigma(s) ** k) * d_sigma(s)
    return total


def identity_sum(z: float, k: int = 1, e_max: Optional[int] = None) -> Fraction:
    """Sum over configurations of (K_z R_z)^k d.

    Without ``e_max`` the exponent sums use their closed forms and the
    result is exact.  With ``e_max`` every configuration with exponents
    <= e_max is enumerated literally, giving a lower partial sum.
    """
    return _identity(z, k, e_max, None)


def identity_sum_odd(z: float, k: int = 1, e_max: Optional[int] = None) -> Fraction:
    """The same sum restricted to configurations with 2 in set C (odd N)."""
    if z < 2:
        raise DomainError("identity_sum_odd needs z >= 2")
    return _identity(z, k, e_max, {2: "C"})


def identity_sum_restricted(z: float, fixed: dict[int, str], k: int = 1) -> Fraction:
    """Closed-form sum with some primes pinned to a set ('A', 'B' or 'C')."""
    return _identity(z, k, None, fixed)


def density_check(s: Configuration, x: int, table=None) -> tuple[int, float]:
    """Count 2 <= n <= x with configuration ``s`` and compare with d * x."""
    n = np.arange(2, x + 1, dtype=np.int64)
    mask = np.ones(n.size, dtype=bool)
    for l in s.setA:
        mask &= (n % l != 0) & ((n - 1) % l != 0)
    for l in s.setC:
        mask &= (n - 1) % l == 0
    for l, e in s.exponents:
        mask &= (n % l**e == 0) & (n % l ** (e + 1) != 0)
    return int(mask.sum()), float(d_sigma(s)) * x


def gl2_distribution(l: int) -> dict[int, Fraction]:
    """Distribution of det(g) + 1 - tr(g) mod l over GL_2(F_l), by enumeration."""
    if l > MAX_GL2_PRIME:
        raise ResourceError(f"GL_2 enumeration limited to l <= {MAX_GL2_PRIME}")
    r = np.arange(l)
    a, b, c, d = (m.ravel() for m in np.meshgrid(r, r, r, r, indexing="ij"))
    det = (a * d - b * c) % l
    keep = det != 0
    vals = (det[keep] + 1 - a[keep] - d[keep]) % l
    counts = np.bincount(vals, minlength=l)
    order = int(keep.sum())
    assert order == (l * l - 1) * (l * l - l)
    return {res: Fraction(int(counts[res]), order) for res in range(l)}
