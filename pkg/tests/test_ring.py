import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from multuniform.ring import (
    InputTooLargeError,
    Modulus,
    NoInverseError,
    circle_dist,
    integer_sqrt_if_square,
    is_prime,
    is_prime_trial,
    mod_inverse,
    primes_up_to,
    select_modulus,
    smallest_prime_factors,
)


@pytest.mark.parametrize("N,ell,expected", [(1, 1, 11), (10, 6, 601), (2000, 6, 120011), (2000, 1, 20011)])
def test_select_modulus_examples(N, ell, expected):
    assert select_modulus(N, ell).ntilde == expected


def test_select_modulus_is_smallest_prime_above():
    for N in range(1, 40):
        for ell in (1, 3, 6):
            p = select_modulus(N, ell).ntilde
            assert is_prime_trial(p)
            assert 10 * ell * N < p <= 20 * ell * N
            assert not any(is_prime_trial(q) for q in range(10 * ell * N + 1, p))


@given(st.integers(1, 10**6), st.integers(1, 20))
def test_select_modulus_window(N, ell):
    m = select_modulus(N, ell)
    assert 10 * ell * N < m.ntilde <= 20 * ell * N
    assert is_prime(m.ntilde)


def test_select_modulus_rejects():
    with pytest.raises(ValueError):
        select_modulus(0, 1)
    with pytest.raises(InputTooLargeError):
        select_modulus(2**62, 6)


def test_modulus_invariants():
    with pytest.raises(ValueError):
        Modulus(10, 6, 603)  # not prime
    with pytest.raises(ValueError):
        Modulus(10, 6, 1301)  # beyond 20 ell N


def test_miller_rabin_matches_trial_division():
    assert [n for n in range(5000) if is_prime(n)] == [n for n in range(5000) if is_prime_trial(n)]
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_mod_inverse_exhaustive():
    for p in [q for q in range(2, 102) if is_prime_trial(q)]:
        for a in range(1, p):
            assert a * mod_inverse(a, p) % p == 1
    assert mod_inverse(2, 11) == 6
    assert mod_inverse(mod_inverse(7, 101), 101) == 7
    with pytest.raises(NoInverseError):
        mod_inverse(22, 11)


def test_primes_up_to():
    assert primes_up_to(10) == [2, 3, 5, 7]
    assert primes_up_to(2) == [2]
    assert len(primes_up_to(30)) == 10
    assert primes_up_to(1000) == [n for n in range(1001) if is_prime_trial(n)]
    with pytest.raises(ValueError):
        primes_up_to(1)


def test_smallest_prime_factors():
    spf = smallest_prime_factors(500)
    for n in range(2, 501):
        assert spf[n] == min(d for d in range(2, n + 1) if n % d == 0)


def test_integer_sqrt_examples():
    assert integer_sqrt_if_square(100) == 10
    assert integer_sqrt_if_square(921600) == 960
    assert integer_sqrt_if_square(2) is None
    assert integer_sqrt_if_square(0) == 0


def test_integer_sqrt_vs_float_up_to_1e6():
    n = np.arange(10**6 + 1)
    r = np.floor(np.sqrt(n)).astype(np.int64)
    is_sq = r * r == n
    got = np.array([integer_sqrt_if_square(int(k)) is not None for k in n])
    assert np.array_equal(got, is_sq)


def test_integer_sqrt_big_squares(rng):
    for _ in range(64):
        r = int.from_bytes(rng.bytes(8), "big") << 64 | int.from_bytes(rng.bytes(8), "big")
        assert integer_sqrt_if_square(r * r) == r
        assert integer_sqrt_if_square(r * r + 1) is None


@given(st.integers(-10**6, 10**6), st.sampled_from([11, 601, 1201]))
def test_circle_dist(x, p):
    d = circle_dist(x, p)
    assert 0 <= d <= p // 2
    assert d == min(abs(x - k * p) for k in range(math.floor(x / p) - 1, math.ceil(x / p) + 2))
