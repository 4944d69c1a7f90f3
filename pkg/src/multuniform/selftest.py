"""Fast invariant checks bundled with the package (``multuniform selftest``)."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .experiments import mixture_average, mixture_count_oracle, recurrence_average, theta_count_naive, theta_set
from .gowers import LinearFormsPattern, u2_norm, u2_norm_direct, u3_norm, u3_norm_direct
from .kernels import uniformity_kernel
from .multiplicative import MultiplicativeFunction, evaluate_range, factor_product, mean
from .quadforms import QuadraticForm, check_hypothesis, normalize_to_ell, verify_paper_identities
from .ring import is_prime, is_prime_trial, select_modulus
from .spectral import CyclicSignal, convolve, convolve_naive, dft, dft_naive, idft


def _close(a, b, tol=1e-9) -> bool:
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol)


def run_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)

    def sig(p: int) -> np.ndarray:
        return rng.normal(size=p) + 1j * rng.normal(size=p)

    def primes() -> tuple[bool, str]:
        ok = all(is_prime(n) == is_prime_trial(n) for n in range(2000))
        return ok and select_modulus(2000, 6).ntilde == 120011, "miller-rabin vs trial division"

    def transform() -> tuple[bool, str]:
        f = sig(61)
        ok = _close(dft(f), dft_naive(f)) and _close(idft(dft(f), 61).values, f)
        a, b = CyclicSignal(61, f), CyclicSignal(61, sig(61))
        ok &= _close(convolve(a, b).values, convolve_naive(a, b).values)
        return ok, "chirp-z dft, inverse and convolution at p=61"

    def norms() -> tuple[bool, str]:
        f = sig(61)
        ok = abs(u2_norm(f) - u2_norm_direct(f)) < 1e-9 and abs(u3_norm(f) - u3_norm_direct(f)) < 1e-9
        n = np.arange(601)
        q = np.exp(2j * np.pi * n * n / 601)
        ok &= abs(u3_norm(q) - 1) < 1e-9 and abs(u2_norm(q) - 601**-0.25) < 1e-9
        return ok, "U2/U3 fast vs direct; quadratic phase signature"

    def multiplicative() -> tuple[bool, str]:
        chi = MultiplicativeFunction.random(seed)
        v = evaluate_range(chi, 500)
        ok = all(abs(v[n - 1] - factor_product(chi, n)) < 1e-9 for n in range(1, 501))
        m2 = MultiplicativeFunction.minus_at_2()
        ok &= abs(mean(m2, 30000) - 1 / 3) < 0.01
        return ok, "sieve vs factorisation; obstruction mean"

    def kernels() -> tuple[bool, str]:
        k = uniformity_kernel(601, 2, 2, 0.6)
        ok = k.values.min() >= 0 and abs(k.values.mean() - 1) < 1e-10
        ok &= _close(dft(k.values), k.spectrum, 1e-10)
        return ok, "kernel non-negative, mean 1, closed-form spectrum"

    def averages() -> tuple[bool, str]:
        pat = LinearFormsPattern(1, 2, 3)
        ok = len(theta_set(40, pat)) == theta_count_naive(40, pat)
        ok &= abs(recurrence_average(MultiplicativeFunction.one(), pat, 40) - 1) < 1e-12
        val = mixture_average([(MultiplicativeFunction.one(), 1.0)], pat, 10, 601)
        ok &= abs(val * 601**2 - mixture_count_oracle(pat, 10, 601)) < 1e-6
        return ok, "Theta_N count, trivial recurrence, mixture counting oracle"

    def quadforms() -> tuple[bool, str]:
        ok = all(v["holds"] for v in verify_paper_identities().values())
        for text in ("16,9,-1,0,0,0", "1,1,-1,-1,0,0"):
            p = QuadraticForm.parse(text)
            ok &= check_hypothesis(p).satisfied
            _, cert = normalize_to_ell(p)
            ok &= cert.identity_holds and cert.box_ok
        return ok, "display identities and normalisation certificates"

    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("primes", primes),
        ("transform", transform),
        ("norms", norms),
        ("multiplicative", multiplicative),
        ("kernels", kernels),
        ("averages", averages),
        ("quadforms", quadforms),
    ]
    out = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed selftest
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append({"name": name, "passed": bool(ok), "detail": detail})
    return out
