"""Averaged Fourier analysis on Z_p for prime p.

Conventions: ``fhat(xi) = E_n f(n) e(-n xi / p)`` (forward carries 1/p),
``f(n) = sum_xi fhat(xi) e(n xi / p)``, and
``(f * g)(n) = E_k g(n - k) f(k)``, so that ``(f*g)^ = fhat * ghat``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CyclicSignal:
    """Complex function on Z_ntilde."""

    ntilde: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.ntilde,):
            raise DimensionError(f"expected {self.ntilde} values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @cached_property
    def spectrum(self) -> np.ndarray:
        s = dft(self.values)
        s.setflags(write=False)
        return s

    def __add__(self, other: "CyclicSignal") -> "CyclicSignal":
        _check_same(self, other)
        return CyclicSignal(self.ntilde, self.values + other.values)

    def __sub__(self, other: "CyclicSignal") -> "CyclicSignal":
        _check_same(self, other)
        return CyclicSignal(self.ntilde, self.values - other.values)

    def shift(self, h: int) -> "CyclicSignal":
        """``n -> f(n + h)``."""
        return CyclicSignal(self.ntilde, np.roll(self.values, -h))

    def modulate(self, xi: int) -> "CyclicSignal":
        """``n -> f(n) e(n xi / ntilde)``."""
        return CyclicSignal(self.ntilde, self.values * character(self.ntilde, xi))

    def conj(self) -> "CyclicSignal":
        return CyclicSignal(self.ntilde, np.conj(self.values))

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def l1_norm(self) -> float:
        return float(np.mean(np.abs(self.values)))

    def l2_norm_sq(self) -> float:
        return float(np.mean(np.abs(self.values) ** 2))


def _check_same(f: CyclicSignal, g: CyclicSignal) -> None:
    if f.ntilde != g.ntilde:
        raise DimensionError(f"modulus mismatch: {f.ntilde} vs {g.ntilde}")


def as_values(f: CyclicSignal | np.ndarray) -> np.ndarray:
    if isinstance(f, CyclicSignal):
        return f.values
    return np.asarray(f, dtype=np.complex128)


def character(p: int, xi: int) -> np.ndarray:
    """``n -> e(n xi / p)`` with the phase reduced mod p before scaling."""
    n = np.arange(p, dtype=np.int64)
    return np.exp(2j * np.pi * ((n * (xi % p)) % p) / p)


def _chirp(p: int) -> np.ndarray:
    n = np.arange(p, dtype=np.int64)
    return np.exp(-1j * np.pi * ((n * n) % (2 * p)) / p)


def chirp_fft(x: np.ndarray) -> np.ndarray:
    """Unnormalised DFT ``sum_n x[n] e(-n k / L)`` along the last axis.

    Bluestein's reduction: ``nk = (n^2 + k^2 - (k-n)^2) / 2`` turns the
    transform into a linear convolution, done with power-of-two FFTs.
    """
    x = np.asarray(x, dtype=np.complex128)
    L = x.shape[-1]
    if L == 1:
        return x.copy()
    M = 1 << (2 * L - 1).bit_length()
    w = _chirp(L)
    b = np.zeros(M, dtype=np.complex128)
    b[:L] = np.conj(w)
    b[M - L + 1 :] = np.conj(w[1:])[::-1]
    a = np.zeros(x.shape[:-1] + (M,), dtype=np.complex128)
    a[..., :L] = x * w
    c = np.fft.ifft(np.fft.fft(a, axis=-1) * np.fft.fft(b), axis=-1)
    return c[..., :L] * w


def dft(f: CyclicSignal | np.ndarray) -> np.ndarray:
    v = as_values(f)
    return chirp_fft(v) / v.shape[-1]


def dft_naive(f: CyclicSignal | np.ndarray) -> np.ndarray:
    """O(p^2) reference transform; row sums use numpy's pairwise summation."""
    v = as_values(f)
    p = v.shape[-1]
    n = np.arange(p, dtype=np.int64)
    out = np.empty(p, dtype=np.complex128)
    step = max(1, 2_000_000 // p)
    for lo in range(0, p, step):
        xi = n[lo : lo + step, None]
        w = np.exp(-2j * np.pi * ((xi * n[None, :]) % p) / p)
        out[lo : lo + step] = np.sum(w * v[None, :], axis=1)
    return out / p


def idft(spectrum: np.ndarray, ntilde: int) -> CyclicSignal:
    s = np.asarray(spectrum, dtype=np.complex128)
    if s.shape != (ntilde,):
        raise DimensionError(f"spectrum length {s.shape} != {ntilde}")
    return CyclicSignal(ntilde, np.conj(chirp_fft(np.conj(s))))


def convolve(f: CyclicSignal, g: CyclicSignal) -> CyclicSignal:
    _check_same(f, g)
    return idft(f.spectrum * g.spectrum, f.ntilde)


def convolve_naive(f: CyclicSignal, g: CyclicSignal) -> CyclicSignal:
    _check_same(f, g)
    p = f.ntilde
    k = np.arange(p)
    out = np.array([np.sum(g.values[(n - k) % p] * f.values) for n in range(p)])
    return CyclicSignal(p, out / p)


def spectrum_csv(spectrum: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("xi,re,im\n")
    for xi, z in enumerate(np.asarray(spectrum)):
        buf.write(f"{xi},{float(z.real)!r},{float(z.imag)!r}\n")
    return buf.getvalue()
