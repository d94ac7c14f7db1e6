import math

import numpy as np
import pytest
from sympy import primerange

from kstarlab.averages import Mode, partial_sums, stream_kstar
from kstarlab.errors import DomainError, ResourceError
from kstarlab.kfun import big_f, k_exact
from kstarlab.arith import factorize


@pytest.fixture(scope="module")
def at_1e7(rc):
    return {m: partial_sums(m, 10**7, rc=rc) for m in (Mode.ALL, Mode.ODD, Mode.PRIME_KSTAR, Mode.PRIME_K)}


def test_two_term_sum(rc):
    r = partial_sums(Mode.ALL, 2, rc=rc)
    assert r.terms == 2
    assert r.sum == rc.k_at_1 + rc.c2


def test_sum_matches_scalar_fsum(rc):
    x = 5000
    want = math.fsum(k_exact(n, rc.c2, k_at_1=rc.k_at_1).k_star for n in range(1, x + 1))
    assert partial_sums(Mode.ALL, x, rc=rc).sum == pytest.approx(want, rel=1e-15)


def test_prime_sum_matches_scalar_fsum(rc):
    ps = list(primerange(2, 20001))
    want = math.fsum(k_exact(p, rc.c2).k for p in ps)
    r = partial_sums(Mode.PRIME_K, 20000, rc=rc)
    assert r.terms == len(ps)
    assert r.sum == pytest.approx(want, rel=1e-15)


def test_all_mean_at_1e6(rc):
    assert abs(partial_sums(Mode.ALL, 10**6, rc=rc).mean - 1) <= 0.05


def test_odd_mean_at_1e6(rc):
    r = partial_sums(Mode.ODD, 10**6, rc=rc)
    assert abs(r.mean - 2 / 3) <= 0.04
    assert r.terms == 500000


def test_shifted_prime_mean_against_j(rc):
    r = partial_sums(Mode.F_SHIFTED, 10**6, rc=rc)
    assert r.reference == rc.j
    assert abs(r.sum / r.terms - rc.j) <= 0.01 * rc.j


def test_shifted_prime_mean_against_divisor_sum_product(rc):
    # sum_{p<=x} F(p-1) = sum_d g(d) pi(x; d, 1), so the mean tends to
    # sum_d g(d)/phi(d) = (1 - 1/3) prod_{p>2} (1 + 1/((p-2)(p+1)(p-1)))
    p = np.array(list(primerange(3, 10**6)), dtype=float)
    oracle = (2 / 3) * float(np.prod(1 + 1 / ((p - 2) * (p + 1) * (p - 1))))
    r = partial_sums(Mode.F_SHIFTED, 10**7, rc=rc)
    assert abs(r.mean - oracle) <= 0.01 * oracle


def test_shifted_prime_values_are_f_of_p_minus_1(rc):
    ps = list(primerange(2, 3000))
    want = math.fsum(big_f(factorize(p - 1)) for p in ps)
    assert partial_sums(Mode.F_SHIFTED, 3000, 10**4, rc=rc).sum == pytest.approx(want, rel=1e-15)


def test_prime_means_at_1e7(at_1e7, rc):
    for m in (Mode.PRIME_KSTAR, Mode.PRIME_K):
        r = at_1e7[m]
        assert r.reference == rc.prime_mean
        assert abs(r.deviation) <= 0.01 * r.reference


def test_prime_k_and_k_star_sums_close(at_1e7):
    diff = at_1e7[Mode.PRIME_KSTAR].sum - at_1e7[Mode.PRIME_K].sum
    assert 0 < diff <= 10


def test_decade_trend(at_1e7):
    for m in (Mode.ALL, Mode.ODD):
        r = at_1e7[m]
        dev = {x: abs(mean - r.reference) for x, mean in r.decades}
        assert sorted(dev) == [10**j for j in range(1, 8)]
        assert dev[10**6] <= dev[10**4] + 0.01
        assert dev[10**7] <= dev[10**4] + 0.01


def test_all_equals_odd_plus_even(rc):
    x = 10**5
    a, o, e = (partial_sums(m, x, rc=rc) for m in (Mode.ALL, Mode.ODD, Mode.EVEN))
    assert abs(a.sum - (o.sum + e.sum)) <= 1e-9 * a.sum
    assert a.terms == o.terms + e.terms


def test_kcirc_report(rc):
    r = partial_sums("kcirc", 10**5, rc=rc)
    assert r.reference == 1.0 and r.reference_label == "conjectural/diagnostic"
    assert r.terms == 10**5 - 1


def test_repeat_runs_are_bit_identical(rc):
    a = partial_sums(Mode.ALL, 300000, 20000, workers=1, rc=rc)
    b = partial_sums(Mode.ALL, 300000, 20000, workers=1, rc=rc)
    c = partial_sums(Mode.ALL, 300000, 20000, workers=3, rc=rc)
    assert a.sum == b.sum == c.sum
    assert a.decades == c.decades


def test_worker_count_from_environment(rc, monkeypatch):
    base = partial_sums(Mode.ODD, 100000, 10000, workers=1, rc=rc).sum
    monkeypatch.setenv("KSTARLAB_THREADS", "2")
    assert partial_sums(Mode.ODD, 100000, 10000, rc=rc).sum == base


def test_report_fields(rc):
    r = partial_sums(Mode.ALL, 1000, rc=rc)
    assert r.c2 == rc.c2 and r.c2_tail_bound == rc.c2_tail
    assert r.mean == r.sum / r.terms and r.deviation == r.mean - 1.0


def test_input_validation(rc):
    with pytest.raises(DomainError):
        partial_sums(Mode.ALL, 1, rc=rc)
    with pytest.raises(ResourceError):
        partial_sums(Mode.ALL, 10**9 + 1, rc=rc)
    with pytest.raises(DomainError):
        partial_sums(Mode.ALL, 1000, 9999, rc=rc)


def test_mode_parsing():
    assert Mode.parse("prime-kstar") is Mode.PRIME_KSTAR
    assert Mode.parse("odd") is Mode.ODD
    with pytest.raises(ValueError):
        Mode.parse("nope")


def test_stream_kstar(rc):
    items = list(stream_kstar(100, rc=rc))
    assert len(items) == 100
    assert items[0] == (1, rc.k_at_1)
    assert items[1] == (2, rc.c2)
    for n, v in items:
        assert v == k_exact(n, rc.c2, k_at_1=rc.k_at_1).k_star
    assert abs(items[0][1] - 0.615133) < 1e-6
