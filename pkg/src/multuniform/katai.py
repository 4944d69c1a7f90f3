"""Prime-pair orthogonality statistic, large-coefficient scans, quadratic-phase correlation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .multiplicative import MultiplicativeFunction, evaluate_range, named_family, random_family
from .ring import circle_dist, primes_up_to
from .spectral import CyclicSignal, as_values


@dataclass
class KataiReport:
    K0: int
    K: int
    pair_statistic: float
    argmax_pair: tuple[int, int]
    chi_correlation: float | None = None
    chi_argmax: str | None = None
    pair_values: dict[tuple[int, int], float] = field(default_factory=dict, repr=False)

    def as_dict(self) -> dict:
        return {
            "K0": self.K0,
            "K": self.K,
            "pair_statistic": self.pair_statistic,
            "argmax_pair": list(self.argmax_pair),
            "chi_correlation": self.chi_correlation,
            "chi_argmax": self.chi_argmax,
        }


def default_test_family(size: int = 50, seed: int = 0) -> list[MultiplicativeFunction]:
    return random_family(size, seed) + named_family()


def katai_statistic(
    f: np.ndarray,
    K0: int,
    K: int,
    family: Sequence[MultiplicativeFunction] | None = None,
) -> KataiReport:
    """max over primes K0 < p < p' < K of |E_{n <= N // p'} f(pn) conj f(p'n)|.

    ``f[i]`` holds f(i + 1). With ``family`` given, also reports
    sup over the family of |E_{n <= N} chi(n) f(n)|.
    """
    f = np.asarray(f, dtype=np.complex128)
    N = len(f)
    if np.max(np.abs(f), initial=0.0) > 1 + 1e-12:
        raise ValueError("katai_statistic needs |f| <= 1")
    if K0 >= K:
        raise ValueError("need K0 < K")
    if K * K > N:
        warnings.warn(f"K^2 = {K * K} exceeds N = {N}; pair averages are short", stacklevel=2)
    ps = [p for p in primes_up_to(max(K - 1, 2)) if K0 < p < K]
    pairs = [(p, q) for i, p in enumerate(ps) for q in ps[i + 1 :] if N // q >= 1]
    if not pairs:
        raise ValueError(f"no prime pair with {K0} < p < p' < {K} and p' <= N")
    values: dict[tuple[int, int], float] = {}
    for p, q in pairs:
        n = np.arange(1, N // q + 1)
        values[(p, q)] = float(abs(np.mean(f[p * n - 1] * np.conj(f[q * n - 1]))))
    # ties -> lexicographically smallest pair (dict keeps pair order)
    argmax = max(values, key=lambda k: (values[k], [-k[0], -k[1]]))
    report = KataiReport(K0, K, values[argmax], argmax, pair_values=values)
    if family:
        corr = [(abs(np.mean(evaluate_range(chi, N) * f)), chi.label) for chi in family]
        best = max(corr, key=lambda t: t[0])
        report.chi_correlation, report.chi_argmax = float(best[0]), best[1]
    return report


@dataclass(frozen=True)
class FrequencyEntry:
    xi: int
    magnitude: float
    best_Q: int
    distance: int  # p * ||best_Q xi / p||


def frequency_scan(chi_n: CyclicSignal, theta: float, Q_cap: int) -> list[FrequencyEntry]:
    """Frequencies with |chi_N^(xi)| >= theta, each paired with the Q <= Q_cap
    minimising p ||Q xi / p|| (smallest Q on ties); largest coefficients first."""
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    p = chi_n.ntilde
    mags = np.abs(chi_n.spectrum)
    xs = np.flatnonzero(mags >= theta)
    qs = np.arange(1, Q_cap + 1, dtype=np.int64)
    out = []
    for xi in xs:
        d = circle_dist(qs * int(xi), p)
        k = int(np.argmin(d))
        out.append(FrequencyEntry(int(xi), float(mags[xi]), int(qs[k]), int(d[k])))
    out.sort(key=lambda e: (-e.magnitude, e.xi))
    return out


def _quad_sum(g: np.ndarray, alpha: float) -> float:
    p = len(g)
    n = np.arange(1, p + 1, dtype=np.float64)
    phase = np.mod(n * n * alpha, 1.0)
    return float(abs(np.sum(g[np.arange(1, p + 1) % p] * np.exp(2j * np.pi * phase)) / p))


def quadratic_phase_correlation(
    g: CyclicSignal | np.ndarray, grid_size: int | None = None, refine: bool = True
) -> tuple[float, float]:
    """Lower bound for sup_alpha |E_{n in [p]} g(n) e(n^2 alpha)|.

    All grid points j / G are evaluated at once: bucketing n by n^2 mod G
    turns the grid into one length-G transform. Refinement runs a ternary
    search on the two neighbouring grid cells. Returns (alpha, value);
    ties go to the smallest alpha.
    """
    v = as_values(g)
    p = len(v)
    G = 4 * p if grid_size is None else grid_size
    if G < p:
        raise ValueError("grid_size must be at least ntilde")
    n = np.arange(1, p + 1, dtype=np.int64)
    idx = (n * n) % G
    w = v[n % p]
    buckets = np.bincount(idx, weights=w.real, minlength=G) + 1j * np.bincount(
        idx, weights=w.imag, minlength=G
    )
    # S(j/G) = |(1/p) sum_r buckets[r] e(r j / G)|
    vals = np.abs(np.fft.ifft(buckets) * G / p)
    j = int(np.argmax(vals))
    best_alpha, best_val = j / G, float(vals[j])
    if refine and best_val > 0:
        lo, hi = (j - 1) / G, (j + 1) / G
        for _ in range(60):
            a, b = lo + (hi - lo) / 3, hi - (hi - lo) / 3
            if _quad_sum(v, a) < _quad_sum(v, b):
                lo = a
            else:
                hi = b
        a = (lo + hi) / 2
        val = _quad_sum(v, a)
        if val > best_val + 1e-15:
            best_alpha, best_val = a % 1.0, val
    return best_alpha, best_val
