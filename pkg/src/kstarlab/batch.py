"""Segmented-sieve kernel evaluating F, G, R (and G°) on a block of integers.

A block [lo, hi) is sieved by the primes up to sqrt(hi); whatever cofactor
survives is a single large prime, handled last.  Local factors are applied
in ascending prime order, matching the pointwise functions in
:mod:`kstarlab.kfun` bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kfun
from .arith import primes_up_to, quadratic_character


@dataclass
class Block:
    lo: int
    hi: int
    f: np.ndarray
    g: np.ndarray
    r: np.ndarray
    is_prime: np.ndarray
    g_circ: Optional[np.ndarray] = None


def _chi_minus(npart: np.ndarray, p: int, chi_table) -> np.ndarray:
    """(-m | p) for each m in ``npart``."""
    if p == 2:
        r = (-npart) % 8
        out = np.zeros(r.shape, dtype=np.float64)
        out[(r == 1) | (r == 7)] = 1.0
        out[(r == 3) | (r == 5)] = -1.0
        return out
    return chi_table[(-npart) % p].astype(np.float64)


def sieve_block(lo: int, hi: int, circ: bool = False) -> Block:
    """Evaluate the multiplicative pieces on every n in [lo, hi), lo >= 1."""
    if lo < 1 or hi <= lo:
        raise ValueError("need 1 <= lo < hi")
    size = hi - lo
    n = np.arange(lo, hi, dtype=np.int64)
    rem = n.copy()
    f = np.ones(size)
    g = np.ones(size)
    r = np.ones(size)
    gc = np.ones(size) if circ else None
    small = primes_up_to(max(2, math.isqrt(hi - 1)))

    for p in small.tolist():
        s = (-lo) % p
        if s >= size:
            continue
        pf = float(p)
        f[s::p] *= kfun.F_LOCAL_2 if p == 2 else kfun.f_local(pf)
        r[s::p] *= kfun.r_local(pf)
        m = (size - s + p - 1) // p
        tg = np.full(m, kfun.g_local_2(pf) if p == 2 else kfun.g_local(pf, pf))
        tc = tg.copy() if circ else None
        chi_table = quadratic_character(p) if circ and p > 2 else None
        rem[s::p] //= p
        pa, a = p * p, 2
        while pa < hi:
            sa = (-lo) % pa
            if sa >= size:
                break
            rem[sa::pa] //= p
            i0, step = (sa - s) // p, pa // p
            paf = float(pa)
            tg[i0::step] = kfun.g_local_2(paf) if p == 2 else kfun.g_local(pf, paf)
            if circ:
                if a % 2:
                    tc[i0::step] = tg[i0::step]
                else:
                    chi = _chi_minus(n[sa::pa] // pa, p, chi_table)
                    if p == 2:
                        tc[i0::step] = kfun.gcirc_even_local_2(paf, chi)
                    else:
                        tc[i0::step] = kfun.gcirc_even_local(pf, paf, chi)
            pa *= p
            a += 1
        g[s::p] *= tg
        if circ:
            gc[s::p] *= tc

    untouched = rem == n
    big = rem > 1
    q = rem[big].astype(np.float64)
    f[big] *= kfun.f_local(q)
    g[big] *= kfun.g_local(q, q)
    r[big] *= kfun.r_local(q)
    if circ:
        gc[big] *= kfun.g_local(q, q)

    is_prime = untouched & (n >= 2)
    sp = small[(small >= lo) & (small < hi)]
    is_prime[sp - lo] = True
    return Block(lo, hi, f, g, r, is_prime, gc)


@dataclass
class KBlock:
    """K-type values on [lo, hi); ``f_shift[i]`` is F(n-1)."""

    lo: int
    hi: int
    n: np.ndarray
    k: np.ndarray
    k_star: np.ndarray
    f_shift: np.ndarray
    is_prime: np.ndarray
    k_circ: Optional[np.ndarray] = None


def k_block(lo: int, hi: int, c2: float, k_at_1: float, circ: bool = False) -> KBlock:
    base = max(1, lo - 1)
    b = sieve_block(base, hi, circ=circ)
    off = lo - base  # 0 only when lo == 1
    n = np.arange(lo, hi, dtype=np.int64)
    g = b.g[off:]
    r = b.r[off:]
    if off:
        fs = b.f[: hi - 1 - base].copy()
    else:
        fs = np.concatenate(([np.nan], b.f[: hi - 2]))
    k = c2 * fs * g
    ks = k * r
    kc = c2 * fs * b.g_circ[off:] * r if circ else None
    if lo == 1:
        k[0] = ks[0] = k_at_1
        if circ:
            kc[0] = np.nan
    return KBlock(lo, hi, n, k, ks, fs, b.is_prime[off:], kc)
