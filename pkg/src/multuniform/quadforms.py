"""Exact solution families of ax^2+by^2+cz^2+dxy+exz+fyz = 0.

Everything here is integer arithmetic; sympy is used only to expand
polynomial identities in (k, m, n).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import sympy as sp

from .ring import integer_sqrt_if_square

K, M, N_ = sp.symbols("k m n", integer=True)


class HypothesisError(ValueError):
    pass


class FactorizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int
    d: int = 0
    e: int = 0
    f: int = 0

    @classmethod
    def parse(cls, text: str) -> "QuadraticForm":
        parts = [int(t) for t in text.split(",")]
        if len(parts) != 6:
            raise ValueError("form needs six integers a,b,c,d,e,f")
        return cls(*parts)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def __call__(self, x, y, z):
        a, b, c, d, e, f = self.coeffs
        return a * x * x + b * y * y + c * z * z + d * x * y + e * x * z + f * y * z

    def z_solutions(self, x: int, y: int) -> list[int]:
        """Integers z with p(x, y, z) = 0, ascending (c != 0 assumed)."""
        if self.c == 0:
            raise ValueError("z_solutions needs c != 0")
        lin = self.e * x + self.f * y
        const = self.a * x * x + self.b * y * y + self.d * x * y
        s = integer_sqrt_if_square(lin * lin - 4 * self.c * const)
        if s is None:
            return []
        out = set()
        for num in (-lin + s, -lin - s):
            if num % (2 * self.c) == 0:
                out.add(num // (2 * self.c))
        return sorted(out)

    def __str__(self) -> str:
        return ",".join(str(t) for t in self.coeffs)


def discriminants(p: QuadraticForm) -> tuple[int, int, int]:
    a, b, c, d, e, f = p.coeffs
    return (e * e - 4 * a * c, f * f - 4 * b * c, (e + f) ** 2 - 4 * c * (a + b + d))


@dataclass(frozen=True)
class HypothesisStatus:
    satisfied: bool
    failed: str | None = None

    def __str__(self) -> str:
        return "SATISFIED" if self.satisfied else f"FAILED({self.failed})"


def check_hypothesis(p: QuadraticForm) -> HypothesisStatus:
    if p.a <= 0:
        return HypothesisStatus(False, f"a = {p.a} not positive")
    if p.b <= 0:
        return HypothesisStatus(False, f"b = {p.b} not positive")
    if p.c >= 0:
        return HypothesisStatus(False, f"c = {p.c} not negative")
    for i, delta in enumerate(discriminants(p), start=1):
        if delta == 0:
            return HypothesisStatus(False, f"Delta{i} = 0")
        if integer_sqrt_if_square(delta) is None:
            return HypothesisStatus(False, f"Delta{i} = {delta} not a square")
    return HypothesisStatus(True)


def _require(p: QuadraticForm) -> None:
    status = check_hypothesis(p)
    if not status.satisfied:
        raise HypothesisError(str(status))


def base_solution(p: QuadraticForm) -> tuple[int, int, int]:
    """A solution with y0 > 0 that equalises the m^2 coefficients of the family below."""
    _require(p)
    a, b, c, d, e, f = p.coeffs
    r3 = integer_sqrt_if_square(discriminants(p)[2])
    y0 = -2 * a * c
    # Both roots +-e r3 of the x0 quadratic equalise the m^2 coefficients;
    # e z0 = -(a x0 + (a + d) y0) then pins the sign of r3 in z0 (free when
    # e = 0). z0 = 0 would flatten both factor discriminants, so skip it.
    for sx in (1, -1):
        x0 = 2 * a * c + 2 * c * d - e * e - e * f + sx * e * r3
        for z0 in (a * (e + f + r3), a * (e + f - r3)):
            if z0 != 0 and p(x0, y0, z0) == 0 and a * x0 + d * y0 + e * z0 == -a * y0:
                return x0, y0, z0
    raise FactorizationError(f"no non-degenerate base solution for {p}")


Triple = tuple[int, int, int]  # coefficients of m^2, mn, n^2


@dataclass(frozen=True)
class ParametricFamily:
    """x = k (x2 m^2 + x1 mn + x0 n^2), likewise y and z."""

    x_coeffs: Triple
    y_coeffs: Triple
    z_coeffs: Triple

    @staticmethod
    def _eval(t: Triple, k: int, m: int, n: int) -> int:
        return k * (t[0] * m * m + t[1] * m * n + t[2] * n * n)

    def evaluate(self, k: int, m: int, n: int) -> tuple[int, int, int]:
        return tuple(self._eval(t, k, m, n) for t in (self.x_coeffs, self.y_coeffs, self.z_coeffs))

    def polys(self) -> tuple[sp.Expr, sp.Expr, sp.Expr]:
        return tuple(
            K * (t[0] * M**2 + t[1] * M * N_ + t[2] * N_**2)
            for t in (self.x_coeffs, self.y_coeffs, self.z_coeffs)
        )

    def residual(self, p: QuadraticForm) -> sp.Expr:
        return sp.expand(p(*self.polys()))


def parametric_family(p: QuadraticForm) -> ParametricFamily:
    """Solutions obtained from the line through the base solution."""
    a, b, c, d, e, f = p.coeffs
    x0, y0, z0 = base_solution(p)
    fam = ParametricFamily(
        (-(a * x0 + d * y0 + e * z0), -(2 * b * y0 + f * z0), b * x0),
        (a * y0, -(2 * a * x0 + e * z0), -(b * y0 + d * x0 + f * z0)),
        (z0 * a, z0 * d, z0 * b),
    )
    if fam.residual(p) != 0:
        raise FactorizationError("parametric family does not vanish identically")
    return fam


def binary_discriminant(t: Triple) -> int:
    return t[1] ** 2 - 4 * t[0] * t[2]


def _split(t: Triple) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integer linear forms (l1 m + l2 n)(l3 m + l4 n) = t with l1 l3 = t[0]."""
    A, B, C = t
    s = integer_sqrt_if_square(binary_discriminant(t))
    if s is None or s == 0 or A == 0:
        raise FactorizationError(f"cannot split {t} into distinct rational factors")
    u, v = (B - s) // 2, (B + s) // 2  # (A m + u n)(A m + v n) = A t(m, n)
    cu, cv = math.gcd(A, u), math.gcd(A, v)
    g = cu * cv // A
    first = (g * A // cu, g * u // cu)
    second = (A // cv, v // cv)
    return first, second


@dataclass(frozen=True)
class EllPattern:
    ell0: int
    ell1: int
    ell2: int
    ell3: int

    def __post_init__(self) -> None:
        if self.ell0 < 1 or self.ell1 < 1:
            raise ValueError("ell0 and ell1 must be positive")
        if self.ell2 < 0 or self.ell3 < 0 or self.ell2 == self.ell3:
            raise ValueError("ell2, ell3 must be distinct and non-negative")

    def xy(self, k: int, m: int, n: int) -> tuple[int, int]:
        x = k * self.ell0 * m * (m + self.ell1 * n)
        y = k * self.ell0 * (m + self.ell2 * n) * (m + self.ell3 * n)
        return x, y

    @property
    def collisions(self) -> list[str]:
        ls = {"ell1": self.ell1, "ell2": self.ell2, "ell3": self.ell3}
        return [f"{a}={b}" for a, b in itertools.combinations(ls, 2) if ls[a] == ls[b]]

    def as_list(self) -> list[int]:
        return [self.ell0, self.ell1, self.ell2, self.ell3]


@dataclass
class Certificate:
    """Witness that p(x, y, k * Z(m, n)) = 0 for the pattern's x, y.

    ``orientation`` is "xy" when x = k l0 m(m + l1 n); "yx" means the two
    products are attached to y and x respectively.
    """

    orientation: str
    z_coeffs: Triple
    identity_holds: bool
    box: tuple[int, int] = (5, 20)
    box_ok: bool = False
    z_signs: dict[str, int] = field(default_factory=dict)
    collisions: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "orientation": self.orientation,
            "z_coeffs": list(self.z_coeffs),
            "identity_holds": self.identity_holds,
            "box": list(self.box),
            "box_ok": self.box_ok,
            "z_signs": self.z_signs,
            "collisions": self.collisions,
        }


def _coeffs(expr: sp.Expr) -> Triple:
    P = sp.Poly(sp.expand(expr), M, N_)
    return (int(P.coeff_monomial(M**2)), int(P.coeff_monomial(M * N_)), int(P.coeff_monomial(N_**2)))


def _pattern_polys(pat: EllPattern, orientation: str) -> tuple[sp.Expr, sp.Expr]:
    first = pat.ell0 * M * (M + pat.ell1 * N_)
    second = pat.ell0 * (M + pat.ell2 * N_) * (M + pat.ell3 * N_)
    return (first, second) if orientation == "xy" else (second, first)


def normalize_to_ell(p: QuadraticForm, box: tuple[int, int] = (5, 20)) -> tuple[EllPattern, Certificate]:
    """Rewrite the family as x = k l0 m(m + l1 n), y = k l0 (m + l2 n)(m + l3 n).

    Steps: split both family quadratics into integer linear forms with equal
    leading products A; replace n by A^2 n so every form becomes A-multiple of
    a monic one; shift m by the least n-coefficient (flipping n when that
    puts the least coefficient on x); then strip common factors.
    """
    fam = parametric_family(p)
    A = fam.x_coeffs[0]
    if A != fam.y_coeffs[0] or A == 0:
        raise FactorizationError("leading coefficients of the family differ")
    (l1, l2), (l3, l4) = _split(fam.x_coeffs)
    (l5, l6), (l7, l8) = _split(fam.y_coeffs)
    if l1 * l3 != A or l5 * l7 != A:
        raise FactorizationError("split does not preserve the leading coefficient")
    scale = A * A  # l1 l3 l5 l7
    lp = [l2 * scale // l1, l4 * scale // l3, l6 * scale // l5, l8 * scale // l7]
    z_expr = fam.polys()[2].subs(K, 1).subs(N_, scale * N_, simultaneous=True)

    orientation, sign = None, 1
    for s in (1, -1):
        vals = [s * t for t in lp]
        if min(vals) in vals[:2]:
            orientation, sign = "xy", s
            break
    if orientation is None:
        orientation, sign = "yx", 1
    vals = [sign * t for t in lp]
    z_expr = z_expr.subs(N_, sign * N_, simultaneous=True)
    if orientation == "xy":
        lo_i = 0 if vals[0] <= vals[1] else 1
        t = vals[lo_i]
        ell1 = vals[1 - lo_i] - t
        ell2, ell3 = vals[2] - t, vals[3] - t
    else:
        lo_i = 2 if vals[2] <= vals[3] else 3
        t = vals[lo_i]
        ell1 = vals[5 - lo_i] - t
        ell2, ell3 = vals[0] - t, vals[1] - t
    z_expr = sp.expand(z_expr.subs(M, M - t * N_, simultaneous=True))
    ell0, z = abs(A), _coeffs(z_expr)
    if A < 0:
        z = tuple(-c for c in z)  # k -> -k absorbs the sign

    ell0, ell1, ell2, ell3, z = _reduce(ell0, ell1, ell2, ell3, z)
    pattern = EllPattern(ell0, ell1, ell2, ell3)
    cert = verify_certificate(p, pattern, orientation, z, box)
    if not (cert.identity_holds and cert.box_ok):
        raise FactorizationError(f"normalised pattern {pattern} fails its certificate")
    return pattern, cert


def _reduce(ell0: int, ell1: int, ell2: int, ell3: int, z: Triple):
    changed = True
    while changed:
        changed = False
        g = math.gcd(ell0, *z)
        if g > 1:
            ell0, z = ell0 // g, tuple(c // g for c in z)
            changed = True
        h = math.gcd(ell1, ell2, ell3)
        for q in sp.primefactors(h) if h > 1 else []:
            if z[1] % q == 0 and z[2] % (q * q) == 0:
                ell1, ell2, ell3 = ell1 // q, ell2 // q, ell3 // q
                z = (z[0], z[1] // q, z[2] // (q * q))
                changed = True
                break
    return ell0, ell1, ell2, ell3, z


def verify_certificate(
    p: QuadraticForm,
    pattern: EllPattern,
    orientation: str,
    z_coeffs: Triple,
    box: tuple[int, int] = (5, 20),
) -> Certificate:
    x_expr, y_expr = _pattern_polys(pattern, orientation)
    z_expr = z_coeffs[0] * M**2 + z_coeffs[1] * M * N_ + z_coeffs[2] * N_**2
    identity = sp.expand(p(K * x_expr, K * y_expr, K * z_expr)) == 0
    kb, mb = box
    ok = True
    signs = {"positive": 0, "zero": 0, "negative": 0}
    for k in range(-kb, kb + 1):
        for m in range(-mb, mb + 1):
            for n in range(-mb, mb + 1):
                x, y = pattern.xy(k, m, n)
                if orientation == "yx":
                    x, y = y, x
                z = k * (z_coeffs[0] * m * m + z_coeffs[1] * m * n + z_coeffs[2] * n * n)
                if p(x, y, z) != 0:
                    ok = False
                if k > 0 and m > 0 and n > 0:
                    signs["positive" if z > 0 else "zero" if z == 0 else "negative"] += 1
    return Certificate(orientation, tuple(z_coeffs), bool(identity), box, ok, signs, pattern.collisions)


def verify_paper_identities() -> dict:
    """16(km(m+3n))^2 + 9(k(m+n)(m-3n))^2 = (k(5m^2+9n^2+6mn))^2 and the
    x^2 + y^2 - xy family with z = k(m^2 + n^2 + mn)."""
    x1, y1, z1 = K * M * (M + 3 * N_), K * (M + N_) * (M - 3 * N_), K * (5 * M**2 + 9 * N_**2 + 6 * M * N_)
    r1 = sp.expand(16 * x1**2 + 9 * y1**2 - z1**2)
    x2, y2, z2 = K * M * (M + 2 * N_), K * (M - N_) * (M + N_), K * (M**2 + N_**2 + M * N_)
    r2 = sp.expand(x2**2 + y2**2 - x2 * y2 - z2**2)
    return {
        "16x^2+9y^2=z^2": {"residual": str(r1), "holds": r1 == 0},
        "x^2+y^2-xy=z^2": {"residual": str(r2), "holds": r2 == 0},
    }
