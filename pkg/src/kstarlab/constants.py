"""Euler-product constants with explicit tail bounds.

Every product is truncated at a prime P and summed in log space with
:func:`math.fsum`.  The caller of :func:`euler_product` supplies a
constant c with |log factor(l)| <= c / l^2 for all primes l > P; since
sum_{l > P} 1/l^2 < 1/(P - 1), the reported ``tail_bound`` c/(P - 1)
bounds |log(true value / truncated value)|.

Tail constants used below (valid for l > P >= 100):

* C2, factor 1 - 1/(l-1)^2: |log| <= t/(1-t) with t = 1/(l-1)^2, so c = 2.
* J, factor 1 + 1/((l-2)(l-1)(l+1)): |log| <= 1.1/l^3, so c = 1.
* K(1), factor 1 - 1/((l-1)^2 (l+1)): same size as J, c = 1.
* mu_2 reference product: excess ~ 1/l^3, c = 1.
* mu_k: the local factor is E[X^k] for a random variable X with
  E[X] = 1 and 1 - 1/(l-1)^2 <= X <= l/(l-1), E[(X-1)^2] <= 3/(l-1)^3.
  Taylor's bound gives 0 <= log factor <= 1.5 k(k-1) e^(k/P) / (P l^2).
* Schur mu'_k: by the mean value theorem the excess is at most
  k e^(k/P) / l^2, so c = k e^(k/P).
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .arith import primes_up_to
from .configspace import p_split
from .errors import DomainError

DEFAULT_TRUNCATION = 10**7
MAX_MOMENT = 64
NAMED = ("C2", "J", "PRIME_MEAN", "U0", "K_AT_1")


@dataclass(frozen=True)
class EulerProductResult:
    value: float
    truncation_prime: int
    tail_bound: float
    factor_id: str

    def interval(self) -> tuple[float, float]:
        return self.value * math.exp(-self.tail_bound), self.value * math.exp(self.tail_bound)


@lru_cache(maxsize=4)
def _primes_float(limit: int) -> np.ndarray:
    return primes_up_to(limit).astype(np.float64)


def euler_product(
    factor: Callable[[np.ndarray], np.ndarray],
    truncation_prime: int,
    tail_constant: float,
    factor_id: str = "CUSTOM",
    *,
    excess: bool = False,
) -> EulerProductResult:
    """Product of ``factor(l)`` over primes l <= truncation_prime.

    ``factor`` is vectorised over a float array of primes.  With
    ``excess=True`` it returns factor - 1 instead, which keeps precision
    when the factors are very close to 1.
    """
    ell = _primes_float(int(truncation_prime))
    vals = np.asarray(factor(ell), dtype=np.float64)
    if vals.shape == ():
        vals = np.full(ell.shape, float(vals))
    if excess:
        if np.any(vals <= -1.0):
            raise DomainError(f"{factor_id}: nonpositive Euler factor")
        logs = np.log1p(vals)
    else:
        if np.any(vals <= 0.0):
            raise DomainError(f"{factor_id}: nonpositive Euler factor")
        logs = np.log(vals)
    value = math.exp(math.fsum(logs.tolist()))
    tail = tail_constant / (truncation_prime - 1) if truncation_prime > 1 else math.inf
    return EulerProductResult(value, int(truncation_prime), tail, factor_id)


def _odd(ell, vals):
    return np.where(ell > 2, vals, 0.0)


def _c2_excess(ell):
    with np.errstate(divide="ignore"):
        return _odd(ell, -1.0 / ((ell - 1.0) ** 2))


def _j_excess(ell):
    with np.errstate(divide="ignore"):
        return _odd(ell, 1.0 / ((ell - 2.0) * (ell - 1.0) * (ell + 1.0)))


def _k1_excess(ell):
    return -1.0 / ((ell - 1.0) ** 2 * (ell + 1.0))


def _check_truncation(P):
    if P < 100:
        raise DomainError("truncation_prime must be >= 100")


@lru_cache(maxsize=32)
def named_constant(name: str, truncation_prime: int = DEFAULT_TRUNCATION) -> EulerProductResult:
    _check_truncation(truncation_prime)
    P = int(truncation_prime)
    if name == "C2":
        return euler_product(_c2_excess, P, 2.0, "C2", excess=True)
    if name == "J":
        return euler_product(_j_excess, P, 1.0, "J", excess=True)
    if name == "K_AT_1":
        return euler_product(_k1_excess, P, 1.0, "K_AT_1", excess=True)
    if name == "U0":
        c2 = named_constant("C2", P)
        return EulerProductResult(2.0 / 3.0 * c2.value, P, c2.tail_bound, "U0")
    if name == "PRIME_MEAN":
        c2, j = named_constant("C2", P), named_constant("J", P)
        return EulerProductResult(2.0 / 3.0 * c2.value * j.value, P, c2.tail_bound + j.tail_bound, "PRIME_MEAN")
    raise DomainError(f"unknown constant {name!r}; expected one of {NAMED}")


def _check_k(k):
    if k < 0:
        raise DomainError("moment order must be >= 0")
    if k > MAX_MOMENT:
        raise DomainError(f"moment order limited to k <= {MAX_MOMENT}")


def _exact_cutoff(k: int) -> int:
    # below this the binomial closed form cancels badly in floating point
    return max(64, 2 * k)


def mu_local_excess(ell: np.ndarray, k: int) -> np.ndarray:
    """Per-prime factor of mu_k minus 1, for a float array of primes."""
    ell = np.asarray(ell, dtype=np.float64)
    out = np.empty(ell.shape)
    cut = _exact_cutoff(k)
    small = ell <= cut
    for i in np.flatnonzero(small):
        out[i] = float(sum(p_split(int(ell[i]), k)) - 1)
    L = ell[~small]
    q = 1.0 / L
    r = 1.0 / (L - 1.0)
    lq = np.log1p(-q)
    pa_m1 = np.expm1((k + 1) * np.log1p(-2.0 * q) - 2 * k * lq)
    s = np.zeros(L.shape)
    qj = q.copy()  # q^(j+1)
    rj = np.ones(L.shape)  # r^j
    for j in range(k + 1):
        s += (-1) ** j * math.comb(k, j) * rj * qj / (1.0 - qj)
        qj = qj * q
        rj = rj * r
    pb = np.exp((1 - k) * lq) * s
    pc = q * np.exp(k * np.log1p(-r * r / (L + 1.0)))
    out[~small] = pa_m1 + pb + pc
    return out


def p_b_direct(l: int, k: int, eps: float = 1e-18) -> float:
    """Direct summation of the B-weight series over d, stopped once a term
    drops below ``eps``; terms are summed exactly.  Test oracle only."""
    s = Fraction(0)
    d = 1
    while True:
        t = Fraction(1, l**d) * (1 - Fraction(1, l**d * (l - 1))) ** k
        s += t
        if t < eps:
            break
        d += 1
    return float(s * (1 - Fraction(1, l)) ** (1 - k))


@lru_cache(maxsize=128)
def moment_mu(k: int, truncation_prime: int = 10**6) -> EulerProductResult:
    """Euler product for the k-th moment of K*."""
    _check_k(k)
    _check_truncation(truncation_prime)
    P = int(truncation_prime)
    if k <= 1:
        # the k = 1 local factor is identically 1
        return EulerProductResult(1.0, P, 0.0, f"MU_K({k})")
    c = 1.5 * k * (k - 1) * math.exp(k / P) / P
    return euler_product(lambda ell: mu_local_excess(ell, k), P, c, f"MU_K({k})", excess=True)


@lru_cache(maxsize=128)
def moment_mu_prime(k: int, truncation_prime: int = 10**6) -> EulerProductResult:
    """Schur's Euler product for the k-th moment of n/phi(n)."""
    _check_k(k)
    _check_truncation(truncation_prime)
    P = int(truncation_prime)
    if k == 0:
        return EulerProductResult(1.0, P, 0.0, "MU_PRIME_K(0)")
    c = k * math.exp(k / P)
    return euler_product(
        lambda ell: np.expm1(-k * np.log1p(-1.0 / ell)) / ell, P, c, f"MU_PRIME_K({k})", excess=True
    )


def mu2_local_excess(ell):
    num = ell**5 - ell**3 - 2 * ell**2 - 2 * ell - 1
    den = (ell - 1) ** 4 * (ell + 1) ** 2 * (ell**2 + ell + 1)
    return num / den


@lru_cache(maxsize=8)
def mu2_reference(truncation_prime: int = 10**6) -> EulerProductResult:
    """The explicit closed-form Euler product for the second moment."""
    _check_truncation(truncation_prime)
    return euler_product(mu2_local_excess, int(truncation_prime), 1.0, "MU2_REFERENCE", excess=True)
