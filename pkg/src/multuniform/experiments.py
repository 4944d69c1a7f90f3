"""Desk-scale probes: recurrence averages, Folner densities, colouring searches."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .gowers import LinearFormsPattern, multiform_average, u3_norm
from .multiplicative import MultiplicativeFunction, evaluate_range, truncate
from .quadforms import EllPattern, QuadraticForm
from .ring import Modulus, integer_sqrt_if_square, primes_up_to, select_modulus
from .spectral import CyclicSignal

FOLNER_MAX = 10**7


class DomainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ThetaSet:
    N: int
    pattern: LinearFormsPattern
    pairs: np.ndarray  # shape (count, 2), columns (m, n)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def density(self) -> float:
        return len(self) / self.N**2


def theta_set(N: int, pattern: LinearFormsPattern) -> ThetaSet:
    """(m, n) in [N]^2 with 1 <= m + l_i n <= N for every i."""
    top = max(pattern.coeffs)
    ms, ns = [], []
    for n in range(1, N + 1):
        hi = N - top * n
        if hi < 1:
            break
        ms.append(np.arange(1, hi + 1))
        ns.append(np.full(hi, n))
    if ms:
        pairs = np.column_stack([np.concatenate(ms), np.concatenate(ns)])
    else:
        pairs = np.zeros((0, 2), dtype=np.int64)
    return ThetaSet(N, pattern, pairs.astype(np.int64))


def theta_count_naive(N: int, pattern: LinearFormsPattern) -> int:
    return sum(
        1
        for m in range(1, N + 1)
        for n in range(1, N + 1)
        if all(1 <= m + l * n <= N for l in pattern.coeffs)
    )


def recurrence_average(chi: MultiplicativeFunction, pattern: LinearFormsPattern, N: int) -> complex:
    """E over Theta_N of chi(m) chi(m+l1 n) conj chi(m+l2 n) conj chi(m+l3 n)."""
    th = theta_set(N, pattern)
    if len(th) == 0:
        raise DomainError(f"Theta_N is empty for N={N}, pattern={pattern.coeffs}")
    v = np.concatenate([[0], evaluate_range(chi, N)])
    m, n = th.pairs[:, 0], th.pairs[:, 1]
    l1, l2, l3 = pattern.coeffs
    prod = v[m] * v[m + l1 * n] * np.conj(v[m + l2 * n]) * np.conj(v[m + l3 * n])
    # divide parts separately: numpy's complex / real division is not exact
    n_pairs = len(prod)
    return complex(np.sum(prod.real) / n_pairs, np.sum(prod.imag) / n_pairs)


def degenerate_count(pattern: LinearFormsPattern, N: int) -> int:
    """#{(m, n) in Theta_N : m(m + l1 n) = (m + l2 n)(m + l3 n)}."""
    th = theta_set(N, pattern)
    m, n = th.pairs[:, 0], th.pairs[:, 1]
    l1, l2, l3 = pattern.coeffs
    return int(np.sum(m * (m + l1 * n) == (m + l2 * n) * (m + l3 * n)))


def mixture_average(
    weights: Sequence[tuple[MultiplicativeFunction, float]],
    pattern: LinearFormsPattern,
    N: int,
    ntilde: int | None = None,
) -> complex:
    """sum_i w_i E_{m,n} 1_[N](n) chi_i,N(m) chi_i,N(m+l1 n) conj(...)(m+l2 n) conj(...)(m+l3 n)."""
    if any(w < 0 for _, w in weights):
        raise ValueError("weights must be non-negative")
    modulus = select_modulus(N, pattern.ell) if ntilde is None else Modulus(N, pattern.ell, ntilde)
    total = 0j
    for chi, w in weights:
        if w == 0:
            continue
        s = truncate(chi, modulus)
        total += w * multiform_average(s, s, s, s, pattern, N)
    return complex(total)


def mixture_count_oracle(pattern: LinearFormsPattern, N: int, ntilde: int) -> int:
    """#{(m, n) in Z_p x [N] : m, m + l_i n (mod p) all in [1, N]}."""
    count = 0
    for n in range(1, N + 1):
        for m in range(ntilde):
            if all(1 <= (m + l * n) % ntilde <= N for l in (0,) + pattern.coeffs):
                count += 1
    return count


def folner_set(depth: int, exponent_cap: int) -> list[int]:
    """{p_1^k_1 ... p_depth^k_depth : 0 <= k_i <= exponent_cap}, ascending."""
    size = (exponent_cap + 1) ** depth
    if size > FOLNER_MAX:
        raise ValueError(f"Folner set of size {size} exceeds {FOLNER_MAX}")
    primes = _first_primes(depth)
    out = [1]
    for p in primes:
        powers = [p**k for k in range(exponent_cap + 1)]
        out = [x * q for x in out for q in powers]
    return sorted(out)


def _first_primes(count: int) -> list[int]:
    bound = 16
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= count:
            return ps[:count]
        bound *= 2


def multiplicative_density(
    predicate: Callable[[int], bool], depth: int, exponent_cap: int
) -> float:
    phi = folner_set(depth, exponent_cap)
    return sum(1 for x in phi if predicate(x)) / len(phi)


def dilate(predicate: Callable[[int], bool], k: int) -> Callable[[int], bool]:
    """Membership in kE = {k x : x in E}."""
    return lambda x: x % k == 0 and predicate(x // k)


def parse_predicate(text: str) -> Callable[[int], bool]:
    """``all | odd | even | residue:<r>:<q>``."""
    if text == "all":
        return lambda x: True
    if text == "odd":
        return lambda x: x % 2 == 1
    if text == "even":
        return lambda x: x % 2 == 0
    name, _, rest = text.partition(":")
    if name == "residue":
        r, q = (int(t) for t in rest.split(":"))
        return lambda x: x % q == r % q
    raise ValueError(f"unknown predicate {text!r}")


# colourings


@dataclass(frozen=True)
class Coloring:
    num_cells: int
    rule: Callable[[np.ndarray], np.ndarray]  # vectorised: integers >= 1 -> cell index
    label: str

    def cells(self, upto: int) -> np.ndarray:
        """Cell index of 1..upto (entry i is the cell of i+1)."""
        c = np.asarray(self.rule(np.arange(1, upto + 1, dtype=np.int64)))
        if c.min() < 0 or c.max() >= self.num_cells:
            raise ValueError("colouring rule produced an out-of-range cell")
        return c

    def cell(self, x: int) -> int:
        return int(self.rule(np.array([x], dtype=np.int64))[0])


def _seven_adic(x: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=np.int64, copy=True)
    while True:
        div = x % 7 == 0
        if not div.any():
            return x % 7 - 1
        x[div] //= 7


def seven_adic_coloring() -> Coloring:
    """Cell = (first non-zero base-7 digit from the right) - 1; six cells."""
    return Coloring(6, _seven_adic, "7adic")


def residue_coloring(q: int) -> Coloring:
    return Coloring(q, lambda x: np.asarray(x) % q, f"residue:{q}")


def trivial_coloring() -> Coloring:
    return Coloring(1, lambda x: np.zeros(len(np.asarray(x)), dtype=np.int64), "trivial")


def parse_coloring(text: str) -> Coloring:
    if text == "7adic":
        return seven_adic_coloring()
    if text == "trivial":
        return trivial_coloring()
    name, _, arg = text.partition(":")
    if name == "residue" and arg:
        return residue_coloring(int(arg))
    raise ValueError(f"unknown colouring {text!r}")


@dataclass(frozen=True, order=True)
class Hit:
    x: int
    y: int
    n: int
    cell: int
    kmn: tuple[int, int, int] | None = None


def coloring_search(
    target: QuadraticForm | EllPattern,
    coloring: Coloring,
    bound: int,
    form: QuadraticForm | None = None,
) -> list[Hit]:
    """Monochromatic distinct pairs, exhaustive within the box.

    For a form: ordered (x, y) with 1 <= x != y <= bound in one cell and a
    positive integer n with p(x, y, n) = 0. For a pattern: (k, m, n) in
    [1, bound]^3 with x, y distinct, positive and in one cell (n is then the
    third parameter, or a z-root when ``form`` is given).
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    if isinstance(target, EllPattern):
        return _search_pattern(target, coloring, bound, form)
    return _search_form(target, coloring, bound)


def _search_form(p: QuadraticForm, coloring: Coloring, bound: int) -> list[Hit]:
    if p.c == 0:
        raise ValueError("search needs c != 0")
    cells = coloring.cells(bound)
    ys = np.arange(1, bound + 1, dtype=np.int64)
    hits: list[Hit] = []
    for x in range(1, bound + 1):
        same = cells == cells[x - 1]
        same[x - 1] = False
        y = ys[same]
        if len(y) == 0:
            continue
        lin = p.e * x + p.f * y
        disc = lin * lin - 4 * p.c * (p.a * x * x + p.b * y * y + p.d * x * y)
        ok = disc >= 0
        root = np.zeros_like(disc)
        root[ok] = np.floor(np.sqrt(disc[ok].astype(np.float64))).astype(np.int64)
        for delta in (-1, 0, 1):  # guard float rounding near perfect squares
            r = root + delta
            cand = ok & (r >= 0) & (r * r == disc)
            for yy, s in zip(y[cand], r[cand]):
                for z in p.z_solutions(x, int(yy)):
                    # exact re-verification before reporting
                    if z > 0 and p(x, int(yy), z) == 0:
                        hits.append(Hit(x, int(yy), z, int(cells[x - 1])))
    return sorted(set(hits))


def _search_pattern(
    pat: EllPattern, coloring: Coloring, bound: int, form: QuadraticForm | None
) -> list[Hit]:
    hits: list[Hit] = []
    for k in range(1, bound + 1):
        for m in range(1, bound + 1):
            for n in range(1, bound + 1):
                x, y = pat.xy(k, m, n)
                if x <= 0 or y <= 0 or x == y:
                    continue
                cx, cy = coloring.cell(x), coloring.cell(y)
                if cx != cy:
                    continue
                third = n
                if form is not None:
                    zs = [z for z in form.z_solutions(x, y) if z > 0]
                    if not zs:
                        continue
                    third = zs[0]
                hits.append(Hit(x, y, third, cx, (k, m, n)))
    return sorted(hits)


def von_neumann_probe(
    seed: int,
    instances: int = 20,
    N: int = 10,
    pattern: LinearFormsPattern = LinearFormsPattern(1, 2, 3),
    family: Sequence[MultiplicativeFunction] | None = None,
) -> dict:
    """Ratios |multiform average| / (min_j ||a_j||_U3)^(1/2) with one slot replaced by noise.

    Slot (i mod 4) of instance i holds seeded random unimodular noise on
    Z_p; the rest hold truncations of family members. The largest ratio is
    the measured constant.
    """
    from .multiplicative import named_family

    modulus = select_modulus(N, pattern.ell)
    p = modulus.ntilde
    fam = list(family) if family is not None else named_family()
    rng = np.random.default_rng(seed)
    ratios = []
    for i in range(instances):
        picks = rng.integers(0, len(fam), size=4)
        slots = [truncate(fam[int(j)], modulus) for j in picks]
        slots[i % 4] = CyclicSignal(p, np.exp(2j * np.pi * rng.random(p)))
        avg = abs(multiform_average(*slots, pattern, N))
        u3 = min(u3_norm(s) for s in slots)
        ratios.append(avg / math.sqrt(u3))
    return {"seed": seed, "ntilde": p, "ratios": ratios, "constant": max(ratios)}
