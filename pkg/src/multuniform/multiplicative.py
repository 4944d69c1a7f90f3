"""Completely multiplicative unimodular functions and their truncations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .ring import Modulus, is_prime, primes_up_to, smallest_prime_factors
from .spectral import CyclicSignal

PrimeRule = Callable[[np.ndarray], np.ndarray]

UNIT_TOL = 1e-12


def _const_one(primes: np.ndarray) -> np.ndarray:
    return np.ones(len(primes), dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class MultiplicativeFunction:
    """chi with chi(mn) = chi(m) chi(n) and |chi(p)| = 1.

    Values on primes come from ``overrides`` when listed, otherwise from
    ``default``, a vectorised rule mapping an array of primes to unit
    complex numbers.
    """

    label: str
    default: PrimeRule = field(default=_const_one, repr=False)
    overrides: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for p, v in self.overrides.items():
            if not is_prime(p):
                raise ValueError(f"override key {p} is not prime")
            if abs(abs(v) - 1) > UNIT_TOL:
                raise ValueError(f"chi({p}) = {v} is not unimodular")

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        vals = np.asarray(self.default(primes), dtype=np.complex128).copy()
        for p, v in self.overrides.items():
            vals[primes == p] = v
        return vals

    def __call__(self, n: int) -> complex:
        if n < 1:
            raise ValueError("chi is defined on positive integers")
        return complex(evaluate_range(self, n)[n - 1])

    # named members

    @classmethod
    def one(cls) -> "MultiplicativeFunction":
        return cls("one")

    @classmethod
    def minus_at_2(cls) -> "MultiplicativeFunction":
        """chi(2) = -1, chi(p) = 1 otherwise, i.e. chi(2^m (2k+1)) = (-1)^m."""
        return cls("minus-at-2", overrides={2: -1.0 + 0j})

    @classmethod
    def phase(cls, alpha: float) -> "MultiplicativeFunction":
        """chi(p) = e(alpha) for every prime, so chi(n) = e(alpha * Omega(n))."""
        z = np.exp(2j * np.pi * alpha)
        return cls(f"phase:{alpha!r}", default=lambda ps: np.full(len(ps), z))

    @classmethod
    def random(cls, seed: int) -> "MultiplicativeFunction":
        """chi(p_i) = e(u_i) with u_i the i-th uniform draw of a seeded PCG64 stream.

        Draws are taken in prime order, so the value at a given prime does not
        depend on how far the range is evaluated.
        """

        def rule(ps: np.ndarray) -> np.ndarray:
            if len(ps) == 0:
                return np.zeros(0, dtype=np.complex128)
            top = int(ps.max())
            table = primes_up_to(max(top, 2))
            u = np.random.default_rng(seed).random(len(table))
            pos = np.searchsorted(table, ps)
            return np.exp(2j * np.pi * u[pos])

        return cls(f"random:{seed}", default=rule)

    @classmethod
    def charlike(cls, q: int) -> "MultiplicativeFunction":
        """Legendre symbol (p/q) at primes p != q, completed by chi(q) = 1."""
        if q < 3 or not is_prime(q):
            raise ValueError("charlike needs an odd prime q")

        def rule(ps: np.ndarray) -> np.ndarray:
            leg = np.array([pow(int(p) % q, (q - 1) // 2, q) for p in ps], dtype=np.int64)
            out = np.where(leg == 1, 1.0, -1.0).astype(np.complex128)
            out[leg == 0] = 1.0
            return out

        return cls(f"charlike:{q}", default=rule)


def parse_chi(spec: str) -> MultiplicativeFunction:
    """``one | minus-at-2 | phase:<alpha> | random:<seed> | charlike:<q>``."""
    name, _, arg = spec.strip().partition(":")
    if name == "one" and not arg:
        return MultiplicativeFunction.one()
    if name == "minus-at-2" and not arg:
        return MultiplicativeFunction.minus_at_2()
    if name == "phase" and arg:
        return MultiplicativeFunction.phase(float(arg))
    if name == "random" and arg:
        return MultiplicativeFunction.random(int(arg))
    if name == "charlike" and arg:
        return MultiplicativeFunction.charlike(int(arg))
    raise ValueError(f"unknown multiplicative function spec {spec!r}")


NAMED_SPECS = ("one", "minus-at-2", "phase:0.3819660112501051", "random:1", "charlike:3")


def named_family() -> list[MultiplicativeFunction]:
    return [parse_chi(s) for s in NAMED_SPECS]


def random_family(size: int, seed: int = 0) -> list[MultiplicativeFunction]:
    seeds = np.random.default_rng(seed).integers(0, 2**31, size=size)
    return [MultiplicativeFunction.random(int(s)) for s in seeds]


def evaluate_range(chi: MultiplicativeFunction, N: int) -> np.ndarray:
    """chi(1), ..., chi(N) as a complex array (entry i holds chi(i+1)).

    With ``q[n] = n // spf[n]`` the recursion ``chi(n) = chi(q[n]) chi(spf[n])``
    is resolved by repeated gathers: after k rounds every n with at most k
    prime factors is exact, so ``floor(log2 N) + 1`` rounds suffice.
    """
    if N < 1:
        raise ValueError("N must be positive")
    spf = smallest_prime_factors(N)
    at_prime = np.ones(N + 1, dtype=np.complex128)
    if N >= 2:
        primes = np.flatnonzero(spf == np.arange(N + 1))
        at_prime[primes] = chi.prime_values(primes)
    factor = at_prime[spf]
    factor[:2] = 1.0
    quot = np.arange(N + 1) // np.maximum(spf, 1)
    quot[:2] = 1
    vals = np.ones(N + 1, dtype=np.complex128)
    for _ in range(N.bit_length()):
        vals = vals[quot] * factor
    return vals[1:]


def mean(chi: MultiplicativeFunction, N: int) -> complex:
    return complex(np.mean(evaluate_range(chi, N)))


def alternating_mean(chi: MultiplicativeFunction, N: int) -> complex:
    """``(1/N) sum_{n<=N} (-1)^n chi(n)``."""
    v = evaluate_range(chi, N)
    sign = np.where(np.arange(1, N + 1) % 2 == 0, 1.0, -1.0)
    return complex(np.mean(sign * v))


@dataclass(frozen=True, eq=False)
class TruncatedSignal(CyclicSignal):
    """chi_N on Z_ntilde: chi on [1, N], zero elsewhere."""

    modulus: Modulus | None = None

    @property
    def N(self) -> int:
        return self.modulus.N


def truncate(chi: MultiplicativeFunction, modulus: Modulus) -> TruncatedSignal:
    vals = np.zeros(modulus.ntilde, dtype=np.complex128)
    vals[1 : modulus.N + 1] = evaluate_range(chi, modulus.N)
    return TruncatedSignal(modulus.ntilde, vals, modulus)


def truncate_values(values: np.ndarray, modulus: Modulus) -> TruncatedSignal:
    """Truncated signal from precomputed chi(1..N)."""
    vals = np.zeros(modulus.ntilde, dtype=np.complex128)
    vals[1 : modulus.N + 1] = np.asarray(values)[: modulus.N]
    return TruncatedSignal(modulus.ntilde, vals, modulus)


def big_omega(n: int) -> int:
    count, d = 0, 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            count += 1
        d += 1
    return count + (1 if n > 1 else 0)


def factor_product(chi: MultiplicativeFunction, n: int) -> complex:
    """chi(n) by trial factorisation; slow oracle for ``evaluate_range``."""
    out = 1 + 0j
    d = 2
    while d * d <= n:
        while n % d == 0:
            out *= complex(chi.prime_values(np.array([d]))[0])
            n //= d
        d += 1
    if n > 1:
        out *= complex(chi.prime_values(np.array([n]))[0])
    return out

