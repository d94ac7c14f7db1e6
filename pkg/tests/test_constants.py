import math

import mpmath
import numpy as np
import pytest
from sympy import primerange

from kstarlab.configspace import p_b_closed
from kstarlab.constants import (
    NAMED, euler_product, moment_mu, moment_mu_prime, mu2_local_excess, mu2_reference,
    named_constant, p_b_direct,
)
from kstarlab.errors import DomainError

# twin prime constant to 25 digits (standard published value)
C2_TRUE = 0.6601618158468695739278121


def log_gap(a, b):
    return abs(math.log(a.value / b.value))


def test_constant_factor_gives_one():
    r = euler_product(lambda ell: np.ones_like(ell), 1000, 0.0)
    assert r.value == 1.0


def test_euler_product_rejects_nonpositive_factor():
    with pytest.raises(DomainError):
        euler_product(lambda ell: 1 - 2 / ell, 1000, 1.0)


def test_c2_interval_contains_true_value():
    r = named_constant("C2", 10**7)
    lo, hi = r.interval()
    assert lo <= C2_TRUE <= hi
    assert abs(r.value - C2_TRUE) < 1e-8


def test_j_against_mpmath_product():
    mpmath.mp.dps = 30
    oracle = mpmath.fprod(1 + mpmath.mpf(1) / ((p - 2) * (p - 1) * (p + 1)) for p in primerange(3, 10**6))
    r = named_constant("J", 10**6)
    assert abs(r.value - float(oracle)) < 1e-13
    assert abs(r.value - 1.1478) < 1e-4


@pytest.mark.parametrize("name,approx,tol", [
    ("U0", 0.440108, 1e-6), ("PRIME_MEAN", 0.5051, 1e-4), ("K_AT_1", 0.615133, 1e-6),
])
def test_named_values_at_1e6(name, approx, tol):
    assert abs(named_constant(name, 10**6).value - approx) < tol


def test_derived_constants_are_consistent():
    c2, j = named_constant("C2").value, named_constant("J").value
    assert named_constant("U0").value == pytest.approx(2 / 3 * c2, rel=1e-15)
    assert named_constant("PRIME_MEAN").value == pytest.approx(2 / 3 * c2 * j, rel=1e-15)


@pytest.mark.parametrize("name", NAMED)
def test_two_point_certification(name):
    a, b = named_constant(name, 10**5), named_constant(name, 10**7)
    assert abs(a.value - b.value) <= a.tail_bound


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_moment_tail_bounds_certify(k):
    assert log_gap(moment_mu(k, 10**5), moment_mu(k, 10**7)) <= moment_mu(k, 10**5).tail_bound
    assert log_gap(moment_mu_prime(k, 10**5), moment_mu_prime(k, 10**7)) <= moment_mu_prime(k, 10**5).tail_bound


def test_named_constant_errors():
    with pytest.raises(DomainError):
        named_constant("PI")
    with pytest.raises(DomainError):
        named_constant("C2", 50)


def test_first_moment_is_exactly_one():
    r = moment_mu(1, 10**6)
    assert r.value == 1.0 and r.tail_bound == 0.0
    assert moment_mu(0, 10**3).value == 1.0


def test_second_moment_value():
    a, b = moment_mu(2, 10**6), mu2_reference(10**6)
    assert abs(a.value - 1.261605) <= 5e-7
    assert abs(b.value - 1.261605) <= 5e-7
    assert abs(a.value - b.value) <= 1e-9


def test_mu2_reference_factor_at_two():
    assert mu2_local_excess(2.0) == pytest.approx(11 / 63, rel=1e-15)


def test_third_moment_bracketed():
    assert moment_mu(2).value < moment_mu(3).value <= moment_mu_prime(3).value


def test_moments_below_schur_and_increasing():
    for k in range(1, 11):
        assert moment_mu(k).value <= moment_mu_prime(k).value
        assert moment_mu(k).value <= moment_mu(k + 1).value


def test_schur_first_moment():
    r = moment_mu_prime(1, 10**6)
    p = np.array(list(primerange(2, 10**6)), dtype=float)
    assert abs(r.value - float(np.prod(1 + 1 / (p * (p - 1))))) < 1e-12
    assert abs(r.value - 1.9435964) < 1e-6
    assert moment_mu_prime(0, 10**3).value == 1.0
    assert moment_mu_prime(2, 10**6).value >= moment_mu(2, 10**6).value


def test_schur_growth_rate():
    def ratio(k):
        return math.log(moment_mu_prime(k).value) / (k * math.log(math.log(k)))
    assert ratio(64) <= 4 * ratio(8)
    for k in (8, 16, 32, 64):
        assert 0 < ratio(k) < 10


def test_moment_order_limits():
    with pytest.raises(DomainError):
        moment_mu(65)
    with pytest.raises(DomainError):
        moment_mu_prime(65)


def test_p_b_closed_form_against_direct_series():
    for ell in primerange(2, 101):
        for k in range(1, 9):
            assert abs(float(p_b_closed(ell, k)) - p_b_direct(ell, k)) <= 1e-15


def test_moment_local_factor_float_path_matches_exact():
    from kstarlab.configspace import p_split
    from kstarlab.constants import mu_local_excess

    ell = np.array([67.0, 101.0, 997.0, 7919.0])
    for k in (2, 5, 8):
        got = mu_local_excess(ell, k)
        want = [float(sum(p_split(int(l), k)) - 1) for l in ell]
        # absolute error is what enters the log-sum
        assert np.max(np.abs(got - np.array(want))) < 1e-16
