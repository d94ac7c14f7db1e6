import random

import pytest
from hypothesis import given, strategies as st
from sympy import factorint, isprime, kronecker_symbol, totient

from kstarlab.arith import (
    build_spf, euler_phi, factorize, is_prime, kronecker, prime_pi,
    primes_up_to, quadratic_character,
)
from kstarlab.errors import DomainError


def test_spf_small_values():
    t = build_spf(10)
    assert (t[9], t[10], t[7]) == (3, 2, 7)
    assert build_spf(2)[2] == 2


def test_spf_large_prime_entry():
    t = build_spf(10**7)
    assert isprime(9999991)
    assert t[9999991] == 9999991


def test_spf_is_smallest_prime_factor():
    t = build_spf(5000)
    for n in range(2, 5001):
        assert t[n] == min(factorint(n))


@pytest.mark.parametrize("limit", [1, 0, -5])
def test_spf_rejects_tiny_limit(limit):
    with pytest.raises(DomainError):
        build_spf(limit)


def test_factorize_examples():
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(1).factors == ()
    assert factorize(9999991).factors == ((9999991, 1),)


def test_factorize_roundtrip_exhaustive():
    t = build_spf(10**5)
    for n in range(2, 10**5 + 1):
        f = factorize(n, t)
        assert f.value() == n


def test_factorize_with_and_without_table_agree():
    t = build_spf(20000)
    for n in range(1, 20001, 7):
        assert factorize(n, t).factors == factorize(n).factors


@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_matches_sympy(n):
    assert dict(factorize(n).factors) == factorint(n)


def test_factorize_errors():
    with pytest.raises(DomainError):
        factorize(0)
    with pytest.raises(DomainError):
        factorize(101, build_spf(100))


def test_radical_and_exponent():
    f = factorize(360)
    assert f.radical() == 30
    assert f.exponent(2) == 3 and f.exponent(7) == 0


def test_kronecker_examples():
    assert kronecker(0, 1) == 1
    assert kronecker(2, 3) == -1
    assert kronecker(4, 7) == 1
    assert kronecker(6, 3) == 0


def test_kronecker_at_zero_denominator():
    assert kronecker(1, 0) == 1 and kronecker(-1, 0) == 1
    assert kronecker(3, 0) == 0 and kronecker(0, 0) == 0


def test_kronecker_matches_legendre_bruteforce():
    for p in primes_up_to(200).tolist()[1:]:
        squares = [0] * p
        for x in range(p):
            squares[x * x % p] += 1
        for a in range(p):
            expected = 0 if a == 0 else squares[a] - 1
            assert kronecker(a, p) == expected


def test_kronecker_mod8_rule_at_two():
    for a in range(-40, 41):
        if a % 2 == 0:
            want = 0
        else:
            want = 1 if a % 8 in (1, 7) else -1
        assert kronecker(a, 2) == want


def test_kronecker_multiplicative_in_denominator():
    rng = random.Random(20240611)
    for _ in range(1000):
        a = rng.randint(-10**6, 10**6)
        b = rng.choice([-1, 1]) * rng.randint(1, 10**4)
        c = rng.choice([-1, 1]) * rng.randint(1, 10**4)
        assert kronecker(a, b * c) == kronecker(a, b) * kronecker(a, c)


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_kronecker_matches_sympy(a, b):
    assert kronecker(a, b) == kronecker_symbol(a, b)


def test_euler_phi_examples():
    assert euler_phi(factorize(1)) == 1
    assert euler_phi(factorize(12)) == 4
    assert euler_phi(factorize(97)) == 96


def test_euler_phi_multiplicative_on_coprime_pairs():
    rng = random.Random(7)
    from math import gcd

    checked = 0
    while checked < 2000:
        m, n = rng.randint(1, 10**4), rng.randint(1, 10**4)
        if gcd(m, n) != 1:
            continue
        assert euler_phi(factorize(m * n)) == euler_phi(factorize(m)) * euler_phi(factorize(n))
        checked += 1


def test_euler_phi_matches_sympy():
    for n in range(1, 3000):
        assert euler_phi(factorize(n)) == totient(n)


def test_prime_helpers():
    assert prime_pi(10**4) == 1229
    assert [n for n in range(50) if is_prime(n)] == primes_up_to(50).tolist()


def test_quadratic_character_table():
    chi = quadratic_character(11)
    assert chi[0] == 0
    assert all(chi[a] == kronecker(a, 11) for a in range(11))
