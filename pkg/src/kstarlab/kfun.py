"""Pointwise evaluation of K, K*, their truncations, F, G, R and K°.

For N >= 2 the Euler product defining K(N) splits as

    K(N) = C2 * F(N-1) * G(N)

with F and G finite products over the primes dividing their argument.
Every pointwise value here is built from the per-prime local factors
below, multiplied in ascending prime order starting from 1.0.  The
sieved batch evaluator in :mod:`kstarlab.batch` uses the very same local
factors in the same order, so both paths give bit-identical floats.

K°(N) differs from K*(N) only at primes p with p^a || N and a even.  Its
p-free product coincides with that of K, so

    K°(N) = C2 * F(N-1) * G°(N) * R(N)

where G° swaps the even-exponent local factor of G for
1 - (p - (-N_p | p)) / (p^(a+1) (p-1)),  N_p = N / p^a.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

from . import arith
from .arith import Factorization, SpfTable, factorize, kronecker
from .errors import DomainError


class Method(str, Enum):
    DECOMPOSITION = "DECOMPOSITION"
    TRUNCATED_DIRECT = "TRUNCATED_DIRECT"


@dataclass(frozen=True)
class KValue:
    n: int
    k: float
    k_star: float
    method: Method = Method.DECOMPOSITION
    truncation_z: Optional[float] = None


# Local factors.  Each accepts a float or a float ndarray of primes; p must
# be odd except where noted.  Keep these expressions fixed: the batch
# evaluator relies on identical rounding.


def f_local(p):
    """Local factor of F at an odd prime p."""
    pm = p - 1.0
    return (1.0 - 1.0 / (pm * pm * (p + 1.0))) / (1.0 - 1.0 / (pm * pm))


F_LOCAL_2 = 1.0 - 1.0 / 3.0


def g_local(p, pa):
    """Local factor of G at an odd prime p with p^a || n; ``pa`` is p^a as float."""
    pm = p - 1.0
    return (1.0 - 1.0 / (pa * pm)) / (1.0 - 1.0 / (pm * pm))


def g_local_2(pa):
    return 1.0 - 1.0 / pa


def gcirc_even_local(p, pa, chi):
    """K° local factor at an odd prime with even exponent; chi = (-N_p | p)."""
    pm = p - 1.0
    return (1.0 - (p - chi) / (pa * p * pm)) / (1.0 - 1.0 / (pm * pm))


def gcirc_even_local_2(pa, chi):
    return 1.0 - (2.0 - chi) / (pa * 2.0)


def r_local(p):
    return p / (p - 1.0)


def _f_product(f: Factorization) -> float:
    out = 1.0
    for p, _ in f.factors:
        out *= F_LOCAL_2 if p == 2 else f_local(float(p))
    return out


def big_f(f: Factorization) -> float:
    if f.n < 1:
        raise DomainError("F(0) is an infinite product; use constants.named_constant('K_AT_1')")
    return _f_product(f)


def big_g(f: Factorization) -> float:
    out = 1.0
    for p, e in f.factors:
        pa = float(p**e)
        out *= g_local_2(pa) if p == 2 else g_local(float(p), pa)
    return out


def big_g_circ(f: Factorization) -> float:
    out = 1.0
    for p, e in f.factors:
        pa = float(p**e)
        if e % 2:
            out *= g_local_2(pa) if p == 2 else g_local(float(p), pa)
        else:
            chi = float(kronecker(-(f.n // p**e), p))
            out *= gcirc_even_local_2(pa, chi) if p == 2 else gcirc_even_local(float(p), pa, chi)
    return out


def r_ratio(f: Factorization) -> float:
    out = 1.0
    for p, _ in f.factors:
        out *= r_local(float(p))
    return out


def aux_g(f: Factorization) -> float:
    """Multiplicative kernel g with F(n) = sum of g(d) over d | n."""
    out = 1.0
    for p, e in f.factors:
        if e > 1:
            return 0.0
        out *= -1.0 / 3.0 if p == 2 else 1.0 / ((p - 2) * (p + 1))
    return out


def _check_n(n: int, table: Optional[SpfTable]):
    if n < 1:
        raise DomainError("n must be a positive integer")
    if table is not None and n > table.limit:
        raise DomainError(f"{n} exceeds SPF table limit {table.limit}")


def k_exact(n: int, c2: float, table: Optional[SpfTable] = None, k_at_1: Optional[float] = None) -> KValue:
    """K(n) and K*(n) through the C2 * F(n-1) * G(n) decomposition.

    ``k_at_1`` is the Euler product K(1); when omitted it is computed by
    :func:`kstarlab.constants.named_constant` at the default truncation.
    """
    n = int(n)
    _check_n(n, table)
    if n == 1:
        if k_at_1 is None:
            from .constants import named_constant

            k_at_1 = named_constant("K_AT_1").value
        return KValue(1, k_at_1, k_at_1)
    k = c2 * _f_product(factorize(n - 1, table)) * big_g(fn := factorize(n, table))
    return KValue(n, k, k * r_ratio(fn))


def k_circ(n: int, c2: float, table: Optional[SpfTable] = None) -> float:
    n = int(n)
    if n < 2:
        raise DomainError("K° is only defined here for n >= 2")
    _check_n(n, table)
    fn = factorize(n, table)
    return c2 * _f_product(factorize(n - 1, table)) * big_g_circ(fn) * r_ratio(fn)


@lru_cache(maxsize=16)
def _primes_to(z: int) -> tuple[int, ...]:
    return tuple(arith.primes_up_to(z).tolist())


def k_truncated(n: int, z: float, table: Optional[SpfTable] = None) -> float:
    """K_z(n): Definition of K with both products cut at primes p <= z."""
    n = int(n)
    _check_n(n, table)
    out = 1.0
    if z < 2:
        return out
    for p in _primes_to(int(z)):
        if n % p:
            s = kronecker(n - 1, p)
            out *= 1.0 - (s * s * p + 1) / ((p - 1) ** 2 * (p + 1))
        else:
            e = 0
            m = n
            while m % p == 0:
                m //= p
                e += 1
            out *= 1.0 - 1.0 / (p**e * (p - 1))
    return out


def r_truncated(n: int, z: float, table: Optional[SpfTable] = None) -> float:
    n = int(n)
    _check_n(n, table)
    out = 1.0
    for p, _ in factorize(n, table).factors:
        if p <= z:
            out *= 1.0 / (1.0 - 1.0 / p)
    return out
