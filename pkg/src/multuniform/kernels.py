"""Fejer-type kernels on Z_p and structured/uniform decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .multiplicative import MultiplicativeFunction, TruncatedSignal, truncate
from .ring import Modulus, circle_dist, mod_inverse
from .spectral import CyclicSignal, convolve, idft
from .gowers import u2_norm, u3_norm

NEG_TOL = 1e-9
MEAN_TOL = 1e-10


class ParameterError(ValueError):
    pass


class EstimationError(RuntimeError):
    def __init__(self, message: str, best: tuple[int, int, int]):
        super().__init__(message)
        self.best = best


class ScheduleError(ValueError):
    pass


def ceil_inv4(theta: float) -> int:
    """ceil(theta^-4), forgiving float noise such as 2**10 * (1 + 1e-15)."""
    if not 0 < theta <= 1:
        raise ParameterError(f"theta must lie in (0, 1], got {theta}")
    x = theta ** -4
    r = round(x)
    return int(r) if abs(x - r) <= 1e-9 * max(1.0, x) else math.ceil(x)


@dataclass(frozen=True)
class KernelParams:
    Q: int
    V: int
    theta: float

    @property
    def m(self) -> int:
        return self.Q * self.V * ceil_inv4(self.theta)


@dataclass(frozen=True, eq=False)
class Kernel:
    """Non-negative function on Z_p with average 1."""

    ntilde: int
    values: np.ndarray = field(repr=False)
    params: KernelParams | None = None
    closed_spectrum: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.ntilde,):
            raise ParameterError("kernel length mismatch")
        if v.min() < -NEG_TOL:
            raise ParameterError(f"kernel takes negative value {v.min()}")
        if abs(v.mean() - 1.0) > MEAN_TOL:
            raise ParameterError(f"kernel mean {v.mean()} != 1")
        v = np.maximum(v, 0.0)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def signal(self) -> CyclicSignal:
        return CyclicSignal(self.ntilde, self.values)

    @property
    def spectrum(self) -> np.ndarray:
        if self.closed_spectrum is not None:
            return self.closed_spectrum
        return self.signal.spectrum

    def spectrum_support(self) -> np.ndarray:
        """Frequencies with non-zero coefficient (from the closed form when known)."""
        return np.flatnonzero(self.spectrum != 0)


def fejer_spectrum(ntilde: int, m: int) -> np.ndarray:
    d = circle_dist(np.arange(ntilde, dtype=np.int64), ntilde)
    return np.where(d < m, 1.0 - d / m, 0.0)


def fejer_kernel(ntilde: int, m: int) -> Kernel:
    """sum_{|xi|<m} (1 - |xi|/m) e(x xi / p), evaluated as (1/m) (sin(pi m x/p) / sin(pi x/p))^2."""
    if m < 1 or ntilde <= 2 * m:
        raise ParameterError(f"Fejer kernel needs 1 <= m and ntilde > 2m (m={m}, ntilde={ntilde})")
    x = np.arange(ntilde, dtype=np.int64)
    vals = np.empty(ntilde)
    vals[0] = m
    t = x[1:] / ntilde
    num = np.sin(np.pi * ((m * x[1:]) % ntilde) / ntilde)
    vals[1:] = num**2 / (m * np.sin(np.pi * t) ** 2)
    return Kernel(ntilde, vals, KernelParams(1, 1, 1.0) if m == 1 else None, fejer_spectrum(ntilde, m))


def uniformity_kernel(ntilde: int, Q: int, V: int, theta: float) -> Kernel:
    """phi(x) = f_m(Q* x) with m = Q V ceil(theta^-4) and Q Q* = 1 mod p.

    Its coefficients are 1 - p ||Q xi/p|| / m when p ||Q xi/p|| < m, else 0.
    """
    if Q < 1 or V < 1:
        raise ParameterError("Q and V must be positive")
    params = KernelParams(Q, V, theta)
    m = params.m
    if ntilde <= 2 * m:
        raise ParameterError(f"need ntilde > 2 Q V ceil(theta^-4) = {2 * m}, got {ntilde}")
    if math.gcd(Q, ntilde) != 1:
        raise ParameterError("Q must be coprime to ntilde")
    qstar = mod_inverse(Q, ntilde)
    base = fejer_kernel(ntilde, m)
    x = np.arange(ntilde, dtype=np.int64)
    vals = base.values[(qstar * x) % ntilde]
    spec = fejer_spectrum(ntilde, m)[(Q * x) % ntilde]
    return Kernel(ntilde, vals, params, spec)


def xi_set(ntilde: int, Q: int, V: int, theta: float) -> np.ndarray:
    """{xi : p ||Q xi / p|| < Q V ceil(theta^-4)}."""
    m = KernelParams(Q, V, theta).m
    xi = np.arange(ntilde, dtype=np.int64)
    return xi[circle_dist(Q * xi, ntilde) < m]


def _check_chain(a: KernelParams, b: KernelParams) -> None:
    if b.theta > a.theta:
        raise ParameterError("second kernel needs theta' <= theta")
    if b.Q % a.Q:
        raise ParameterError("Q' must be a multiple of Q")
    if b.V < a.V:
        raise ParameterError("V' must be at least V")


def kernel_monotonicity(
    ntilde: int, params_a: tuple[int, int, float], params_b: tuple[int, int, float]
) -> bool:
    """True iff the coefficients of kernel B dominate those of kernel A, which are >= 0."""
    a, b = KernelParams(*params_a), KernelParams(*params_b)
    _check_chain(a, b)
    sa = uniformity_kernel(ntilde, a.Q, a.V, a.theta).spectrum
    sb = uniformity_kernel(ntilde, b.Q, b.V, b.theta).spectrum
    return bool(np.all(sb >= sa) and np.all(sa >= -1e-12))


@dataclass
class DecompositionResult:
    chi_s: CyclicSignal
    chi_u: CyclicSignal
    chi_e: CyclicSignal
    Q: int
    R: float
    theta: float
    measured_lipschitz: float
    measured_u2: float
    measured_u3: float | None = None
    V: int = 1
    xi_size: int = 0
    j0: int | None = None
    energies: list[float] | None = None
    weighted_l1_error: float | None = None

    def reconstruction_error(self, chi_n: CyclicSignal) -> float:
        total = self.chi_s.values + self.chi_u.values + self.chi_e.values
        return float(np.max(np.abs(total - chi_n.values)))

    def summary(self) -> dict:
        out = {
            "Q": self.Q,
            "V": self.V,
            "R": self.R,
            "theta": self.theta,
            "xi_size": self.xi_size,
            "measured_lipschitz": self.measured_lipschitz,
            "measured_u2": self.measured_u2,
            "measured_u3": self.measured_u3,
            "sup_chi_s": self.chi_s.sup_norm,
            "l1_chi_e": self.chi_e.l1_norm(),
        }
        if self.j0 is not None:
            out.update(j0=self.j0, energies=self.energies, weighted_l1_error=self.weighted_l1_error)
        return out


def lipschitz(sig: CyclicSignal, Q: int) -> float:
    """sup_n p |sig(n + Q) - sig(n)|."""
    v = sig.values
    return float(sig.ntilde * np.max(np.abs(np.roll(v, -Q) - v)))


def u2_decompose(
    chi_n: CyclicSignal, Q: int, V: int, theta: float, measure_u3: bool = False
) -> DecompositionResult:
    """chi_s = chi_N * phi, chi_u = chi_N - chi_s, chi_e = 0."""
    phi = uniformity_kernel(chi_n.ntilde, Q, V, theta)
    chi_s = convolve(chi_n, phi.signal)
    chi_u = chi_n - chi_s
    xi_size = len(phi.spectrum_support())
    return DecompositionResult(
        chi_s=chi_s,
        chi_u=chi_u,
        chi_e=CyclicSignal(chi_n.ntilde, np.zeros(chi_n.ntilde)),
        Q=Q,
        R=float(xi_size * phi.params.m),
        theta=theta,
        measured_lipschitz=lipschitz(chi_s, Q),
        measured_u2=u2_norm(chi_u),
        measured_u3=u3_norm(chi_u) if measure_u3 else None,
        V=V,
        xi_size=xi_size,
    )


@dataclass(frozen=True)
class QVEstimate:
    Q: int
    V: int
    W: int
    large_spectrum_size: int


def large_spectrum(
    N: int, modulus: Modulus, theta: float, family: Sequence[MultiplicativeFunction]
) -> np.ndarray:
    """Frequencies where some family member has |chi_N^(xi)| >= theta^2."""
    if not family:
        raise ParameterError("family must be non-empty")
    best = np.zeros(modulus.ntilde)
    for chi in family:
        best = np.maximum(best, np.abs(truncate(chi, modulus).spectrum))
    return np.flatnonzero(best >= theta**2)


def estimate_QV(
    N: int,
    ntilde: int,
    theta: float,
    family: Sequence[MultiplicativeFunction],
    k_cap: int = 7,
    w_bound: int | None = None,
    ell: int | None = None,
) -> QVEstimate:
    """Finite-N, finite-family stand-in for the constants Q(theta), V(theta).

    For k = 1, 2, ..., k_cap and q = k!, W(q) = max over the large spectrum of
    p ||q xi / p||. The first q whose W is "bounded" wins, with V = 1 + ceil(W / q).
    Bounded means W <= w_bound when given, otherwise that the resulting
    kernel fits (p > 2 q V ceil(theta^-4)).
    """
    if ell is None:
        ell = _infer_ell(N, ntilde)
    modulus = Modulus(N, ell, ntilde)
    A = large_spectrum(N, modulus, theta, family)
    c = ceil_inv4(theta)
    best: tuple[int, int, int] | None = None
    for k in range(1, k_cap + 1):
        q = math.factorial(k)
        if math.gcd(q, ntilde) != 1:
            continue
        W = int(circle_dist(q * A, ntilde).max()) if len(A) else 0
        V = 1 + -(-W // q)
        if best is None or W < best[2]:
            best = (q, V, W)
        ok = W <= w_bound if w_bound is not None else ntilde > 2 * q * V * c
        if ok:
            return QVEstimate(q, V, W, len(A))
    raise EstimationError(f"no k <= {k_cap} gives bounded W", best)


def _infer_ell(N: int, ntilde: int) -> int:
    for ell in range(1, ntilde):
        if 10 * ell * N < ntilde <= 20 * ell * N:
            return ell
    raise ParameterError("cannot infer ell from (N, ntilde)")


def default_schedule(length: int, theta0: float = 1.0) -> list[float]:
    """theta_j with theta_j^4 = theta0^4 2^-(j-1): each step doubles ceil(theta^-4)."""
    return [theta0 * 2.0 ** (-(j - 1) / 4) for j in range(1, length + 1)]


def halving_schedule(length: int, theta0: float = 1.0) -> list[float]:
    return [theta0 * 2.0 ** (-(j - 1)) for j in range(1, length + 1)]


def steps_for(epsilon: float) -> int:
    """J = 1 + ceil(2 / epsilon^2)."""
    return 1 + math.ceil(2.0 / epsilon**2 - 1e-12)


def monotone_qv_schedule(
    N: int,
    modulus: Modulus,
    schedule: Sequence[float],
    family: Sequence[MultiplicativeFunction],
    k_cap: int = 7,
) -> list[tuple[int, int]]:
    """Per-theta (Q, V) estimates, forced along the chain: Q_j | Q_{j+1}, V_j <= V_{j+1}."""
    out: list[tuple[int, int]] = []
    Q, V = 1, 1
    for theta in schedule:
        est = estimate_QV(N, modulus.ntilde, theta, family, k_cap=k_cap, ell=modulus.ell)
        Q = math.lcm(Q, est.Q)
        V = max(V, est.V)
        out.append((Q, V))
    return out


def u3_energy_decompose(
    chi_n: CyclicSignal,
    theta_schedule: Sequence[float],
    weights: Sequence[tuple[MultiplicativeFunction, float]],
    epsilon: float,
    qv_schedule: Sequence[tuple[int, int]],
    modulus: Modulus,
    measure_u3: bool = False,
) -> DecompositionResult:
    """Energy-increment selection of a scale j0 along a decreasing theta chain.

    Schedule entries are theta_1 > theta_2 > ...; kernel phi_j uses
    (Q_j, V_j, theta_j). With J = 1 + ceil(2/eps^2), the weighted energies
    e_j = sum_i w_i ||chi_i * (phi_{j+1} - phi_j)||_2^2, j = 2..J, sum to at
    most 2, so some e_j <= 2/(J-1) <= eps^2; the first such j is j0.
    """
    J = steps_for(epsilon)
    thetas = list(theta_schedule)
    if len(thetas) < J + 1:
        raise ScheduleError(f"schedule needs at least J+1 = {J + 1} entries, got {len(thetas)}")
    if any(b >= a for a, b in zip(thetas, thetas[1:])):
        raise ScheduleError("schedule must be strictly decreasing")
    if len(qv_schedule) < J + 1:
        raise ScheduleError("qv_schedule shorter than the theta schedule")
    wsum = sum(w for _, w in weights)
    if any(w < 0 for _, w in weights) or abs(wsum - 1.0) > 1e-9:
        raise ScheduleError(f"weights must be non-negative and sum to 1 (sum={wsum})")
    params = [KernelParams(q, v, t) for (q, v), t in zip(qv_schedule, thetas)]
    for a, b in zip(params[: J + 1], params[1 : J + 1]):
        try:
            _check_chain(a, b)
        except ParameterError as exc:
            raise ScheduleError(str(exc)) from exc

    p = chi_n.ntilde
    # index j (1-based) -> kernel; only j = 2..J+1 are used
    kernels = {j: uniformity_kernel(p, *_qvt(params[j - 1])) for j in range(2, J + 2)}
    members = [(truncate(chi, modulus), w) for chi, w in weights]
    power = [(np.abs(sig.spectrum) ** 2, w) for sig, w in members]
    energies = []
    for j in range(2, J + 1):
        diff2 = (kernels[j + 1].spectrum - kernels[j].spectrum) ** 2
        energies.append(float(sum(w * np.sum(pw * diff2) for pw, w in power)))
    threshold = 2.0 / (J - 1)
    j0 = next((j for j, e in zip(range(2, J + 1), energies) if e <= threshold), None)
    if j0 is None:
        j0 = next((j for j, e in zip(range(2, J + 1), energies) if e <= epsilon**2), None)
    if j0 is None:
        raise ScheduleError("no admissible j0; energies exceed eps^2 everywhere")

    psi1, psi2 = kernels[j0], kernels[j0 + 1]
    chi_s = convolve(chi_n, psi1.signal)
    smooth2 = convolve(chi_n, psi2.signal)
    chi_e = smooth2 - chi_s
    chi_u = chi_n - smooth2
    l1 = 0.0
    for sig, w in members:
        l1 += w * convolve(sig, CyclicSignal(p, psi2.values - psi1.values)).l1_norm()
    xi_size = len(psi1.spectrum_support())
    return DecompositionResult(
        chi_s=chi_s,
        chi_u=chi_u,
        chi_e=chi_e,
        Q=psi1.params.Q,
        R=float(xi_size * psi1.params.m),
        theta=psi1.params.theta,
        measured_lipschitz=lipschitz(chi_s, psi1.params.Q),
        measured_u2=u2_norm(chi_u),
        measured_u3=u3_norm(chi_u) if measure_u3 else None,
        V=psi1.params.V,
        xi_size=xi_size,
        j0=j0,
        energies=energies,
        weighted_l1_error=float(l1),
    )


def _qvt(k: KernelParams) -> tuple[int, int, float]:
    return k.Q, k.V, k.theta
