"""Integer and modular arithmetic helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Deterministic Miller-Rabin witnesses; correct for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981
MAX_MODULUS = 2**63 - 1


class InputTooLargeError(ValueError):
    pass


class NoInverseError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise InputTooLargeError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime_trial(n: int) -> bool:
    """Trial division; slow reference used as a test oracle."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % q for q in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class Modulus:
    """Truncation length ``N`` together with the prime ``ntilde > 10*ell*N``."""

    N: int
    ell: int
    ntilde: int

    def __post_init__(self) -> None:
        if self.N < 1 or self.ell < 1:
            raise ValueError("N and ell must be positive")
        if not (10 * self.ell * self.N < self.ntilde <= 20 * self.ell * self.N):
            raise ValueError(f"ntilde={self.ntilde} outside (10*ell*N, 20*ell*N]")
        if not is_prime(self.ntilde):
            raise ValueError(f"ntilde={self.ntilde} is not prime")


def select_modulus(N: int, ell: int) -> Modulus:
    """Smallest prime strictly greater than ``10*ell*N``."""
    if N < 1 or ell < 1:
        raise ValueError("N and ell must be positive")
    if 20 * ell * N > MAX_MODULUS:
        raise InputTooLargeError(f"20*ell*N = {20 * ell * N} does not fit in 63 bits")
    p = 10 * ell * N + 1
    while not is_prime(p):
        p += 1
    return Modulus(N=N, ell=ell, ntilde=p)


def mod_inverse(a: int, p: int) -> int:
    if a % p == 0:
        raise NoInverseError(f"{a} is not invertible modulo {p}")
    return pow(a, -1, p)


def primes_up_to(K: int) -> list[int]:
    if K < 2:
        raise ValueError("K must be at least 2")
    return [int(p) for p in np.flatnonzero(_sieve(K))]


def _sieve(K: int) -> np.ndarray:
    flags = np.ones(K + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(K) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def smallest_prime_factors(N: int) -> np.ndarray:
    """Table ``spf`` with ``spf[n]`` the least prime factor of n (``spf[0]=spf[1]=0``)."""
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(N + 1)
    unset = (spf == 0) & (idx >= 2)
    spf[unset] = idx[unset]
    return spf


def integer_sqrt_if_square(n: int) -> int | None:
    if n < 0:
        return None
    s = math.isqrt(n)
    return s if s * s == n else None


def circle_dist(x: np.ndarray | int, p: int) -> np.ndarray | int:
    """``p * ||x/p||``: distance from x to the nearest multiple of p."""
    r = np.mod(x, p)
    return np.minimum(r, p - r)
