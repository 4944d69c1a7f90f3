"""Gowers U2/U3 norms on Z_p and averages over four linear forms."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .spectral import CyclicSignal, DimensionError, as_values, chirp_fft, dft

DIRECT_U2_MAX = 4096
DIRECT_U3_MAX = 128


class SizeError(ValueError):
    pass


@dataclass(frozen=True)
class LinearFormsPattern:
    """Coefficients of the forms m, m + l1 n, m + l2 n, m + l3 n."""

    ell1: int
    ell2: int
    ell3: int

    def __post_init__(self) -> None:
        ls = (self.ell1, self.ell2, self.ell3)
        if min(ls) < 1 or len(set(ls)) != 3:
            raise ValueError(f"pattern {ls} must be distinct positive integers")

    @property
    def ell(self) -> int:
        return self.ell1 + self.ell2 + self.ell3

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.ell1, self.ell2, self.ell3)

    @classmethod
    def parse(cls, text: str) -> "LinearFormsPattern":
        a, b, c = (int(t) for t in text.split(","))
        return cls(a, b, c)


def u2_norm(f: CyclicSignal | np.ndarray) -> float:
    """(sum_xi |fhat(xi)|^4)^(1/4)."""
    spec = f.spectrum if isinstance(f, CyclicSignal) else dft(f)
    return float(np.sum(np.abs(spec) ** 4) ** 0.25)


def u2_norm_direct(f: CyclicSignal | np.ndarray) -> float:
    v = as_values(f)
    p = len(v)
    if p > DIRECT_U2_MAX:
        raise SizeError(f"direct U2 limited to length {DIRECT_U2_MAX}")
    cv = np.conj(v)
    acc = np.array([abs(np.mean(np.roll(v, -h) * cv)) ** 2 for h in range(p)])
    return float(np.mean(acc) ** 0.25)


def _support_window(v: np.ndarray) -> tuple[int, int] | None:
    """(start, length) of the shortest cyclic interval containing supp(v)."""
    idx = np.flatnonzero(v != 0)
    if len(idx) == 0:
        return None
    p = len(v)
    gaps = np.diff(np.concatenate([idx, [idx[0] + p]]))
    k = int(np.argmax(gaps))
    start = int(idx[(k + 1) % len(idx)])
    length = p - int(gaps[k]) + 1
    return start, length


def _u2_fourth_linear(rows: np.ndarray, p: int) -> np.ndarray:
    """||g||_{U2}^4 on Z_p for rows supported in [0, L) with 2L - 1 <= p.

    The cyclic autocorrelation then equals the linear one, computed with a
    zero-padded power-of-two FFT.
    """
    L = rows.shape[-1]
    M = 1 << (2 * L - 1).bit_length()
    F = np.fft.fft(rows, n=M, axis=-1)
    ac = np.fft.ifft(np.abs(F) ** 2, axis=-1)
    return np.sum(np.abs(ac) ** 2, axis=-1) / float(p) ** 3


def _u3_compact(v: np.ndarray, start: int, L: int, threads: int) -> float:
    p = len(v)
    g = np.roll(v, -start)[:L]
    cg = np.conj(g)

    def block(hs: range) -> np.ndarray:
        rows = np.zeros((len(hs), L), dtype=np.complex128)
        for i, h in enumerate(hs):
            rows[i, : L - h] = g[h:] * cg[: L - h]
        return _u2_fourth_linear(rows, p)

    per_h = _run_blocks(block, L, threads)
    # Delta_{-h} f has the same U2 norm as Delta_h f.
    total = per_h[0] + 2.0 * np.sum(per_h[1:])
    return float(max(total / p, 0.0) ** 0.125)


def _u3_dense(v: np.ndarray, threads: int) -> float:
    p = len(v)
    cv = np.conj(v)
    idx = np.arange(p)

    def block(hs: range) -> np.ndarray:
        h = np.asarray(hs)[:, None]
        rows = v[(idx[None, :] + h) % p] * cv[None, :]
        spec = chirp_fft(rows) / p
        return np.sum(np.abs(spec) ** 4, axis=-1)

    per_h = _run_blocks(block, p, threads)
    return float(max(np.mean(per_h), 0.0) ** 0.125)


def _run_blocks(block, count: int, threads: int) -> np.ndarray:
    size = max(1, min(count, 1_000_000 // max(count, 1) + 1, 256))
    chunks = [range(lo, min(lo + size, count)) for lo in range(0, count, size)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(block, chunks))
    else:
        parts = [block(c) for c in chunks]
    # Concatenate in chunk order: the final reduction order never depends on threads.
    return np.concatenate(parts)


def u3_norm(f: CyclicSignal | np.ndarray, threads: int = 1) -> float:
    """(E_h ||Delta_h f||_{U2}^4)^(1/8) with Delta_h f(n) = f(n+h) conj f(n).

    Signals supported in a cyclic window of length L with 2L - 1 <= p only
    have 2L - 1 non-zero derivatives; those are evaluated on the window.
    """
    v = as_values(f)
    p = len(v)
    win = _support_window(v)
    if win is None:
        return 0.0
    start, L = win
    if 2 * L - 1 <= p and L < p // 2:
        return _u3_compact(v, start, L, threads)
    return _u3_dense(v, threads)


def u3_norm_direct(f: CyclicSignal | np.ndarray) -> float:
    """Triple average straight from the definition; O(p^3)."""
    v = as_values(f)
    p = len(v)
    if p > DIRECT_U3_MAX:
        raise SizeError(f"direct U3 limited to length {DIRECT_U3_MAX}")
    n = np.arange(p)
    cv = np.conj(v)
    total = 0.0
    for h1 in range(p):
        h2 = n[:, None]
        prod = (
            v[(n[None, :] + h1 + h2) % p]
            * cv[(n[None, :] + h1) % p]
            * cv[(n[None, :] + h2) % p]
            * v[None, :]
        )
        total += float(np.sum(np.abs(np.mean(prod, axis=1)) ** 2))
    return float((total / p**2) ** 0.125)


def monotonicity_check(f: CyclicSignal | np.ndarray, threads: int = 1) -> tuple[float, float]:
    return u2_norm(f), u3_norm(f, threads=threads)


def multiform_average(
    a0: CyclicSignal,
    a1: CyclicSignal,
    a2: CyclicSignal,
    a3: CyclicSignal,
    pattern: LinearFormsPattern,
    N: int,
) -> complex:
    """E_{m,n in Z_p} 1_[N](n) a0(m) a1(m+l1 n) conj(a2(m+l2 n)) conj(a3(m+l3 n))."""
    p = a0.ntilde
    if any(a.ntilde != p for a in (a1, a2, a3)):
        raise DimensionError("all four signals must share the modulus")
    if not 1 <= N < p:
        raise ValueError(f"need 1 <= N < ntilde, got N={N}, ntilde={p}")
    v0, v1 = a0.values, a1.values
    c2, c3 = np.conj(a2.values), np.conj(a3.values)
    m = np.flatnonzero(v0)
    w0 = v0[m]
    l1, l2, l3 = pattern.coeffs
    total = 0j
    for n in range(1, N + 1):
        total += np.sum(w0 * v1[(m + l1 * n) % p] * c2[(m + l2 * n) % p] * c3[(m + l3 * n) % p])
    return complex(total / p**2)


def multiform_average_naive(a0, a1, a2, a3, pattern: LinearFormsPattern, N: int) -> complex:
    """Double loop over (m, n) in Z_p x [N]; test oracle."""
    p = a0.ntilde
    l1, l2, l3 = pattern.coeffs
    v0, v1, v2, v3 = (a.values for a in (a0, a1, a2, a3))
    total = 0j
    for n in range(1, N + 1):
        for m in range(p):
            total += (
                v0[m]
                * v1[(m + l1 * n) % p]
                * np.conj(v2[(m + l2 * n) % p])
                * np.conj(v3[(m + l3 * n) % p])
            )
    return complex(total / p**2)


@dataclass(frozen=True)
class ArithmeticProgression:
    start: int
    step: int
    length: int

    def elements(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.length, dtype=np.int64)


def progression_correlation_bound(
    a: CyclicSignal, P: ArithmeticProgression
) -> tuple[float, float]:
    """(|E_n 1_P(n) a(n)|, ||hat 1_P||_{4/3} ||a||_{U2}); the second bounds the first by Holder."""
    p = a.ntilde
    el = P.elements()
    if P.length < 1 or el.min() < 1 or el.max() > p:
        raise ValueError(f"progression must lie in [1, {p}]")
    ind = np.zeros(p)
    ind[el % p] = 1.0
    lhs = abs(np.mean(ind * a.values))
    ind_hat = dft(ind)
    l43 = np.sum(np.abs(ind_hat) ** (4.0 / 3.0)) ** 0.75
    return float(lhs), float(l43 * u2_norm(a))
