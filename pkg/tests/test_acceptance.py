"""The ten acceptance criteria, each with its tolerance and runtime budget."""

import time

import numpy as np

from multuniform.experiments import (
    coloring_search,
    mixture_average,
    mixture_count_oracle,
    seven_adic_coloring,
    trivial_coloring,
    von_neumann_probe,
)
from multuniform.gowers import LinearFormsPattern, u2_norm, u2_norm_direct, u3_norm, u3_norm_direct
from multuniform.kernels import (
    default_schedule,
    estimate_QV,
    kernel_monotonicity,
    monotone_qv_schedule,
    steps_for,
    u2_decompose,
    u3_energy_decompose,
    uniformity_kernel,
    xi_set,
)
from multuniform.multiplicative import MultiplicativeFunction, alternating_mean, mean, named_family, truncate
from multuniform.quadforms import (
    QuadraticForm,
    base_solution,
    discriminants,
    normalize_to_ell,
    parametric_family,
    verify_paper_identities,
)
from multuniform.ring import select_modulus
from multuniform.spectral import dft

PAT = LinearFormsPattern(1, 2, 3)


def test_criterion_01_obstruction_means(report):
    t = time.perf_counter()
    chi = MultiplicativeFunction.minus_at_2()
    m, am = mean(chi, 10**6), alternating_mean(chi, 10**6)
    dt = time.perf_counter() - t
    ok = abs(m - 1 / 3) < 0.01 and abs(am + 2 / 3) < 0.01 and dt < 5
    report(1, "obstruction means", ok, f"mean={m.real:.6f} alt={am.real:.6f} ({dt:.2f}s)")


def test_criterion_02_norm_identities(report):
    t = time.perf_counter()
    rng = np.random.default_rng(2)
    gap2 = max(abs(u2_norm(f) - u2_norm_direct(f)) for f in (rng.normal(size=(20, 61)) + 1j * rng.normal(size=(20, 61))))
    gap3 = max(abs(u3_norm(f) - u3_norm_direct(f)) for f in (rng.normal(size=(3, 61)) + 1j * rng.normal(size=(3, 61))))
    worst = min(u3_norm(f) - u2_norm(f) for f in (rng.normal(size=(100, 601)) + 1j * rng.normal(size=(100, 601))))
    dt = time.perf_counter() - t
    ok = gap2 < 1e-9 and gap3 < 1e-9 and worst >= -1e-9 and dt < 30
    report(2, "norm identities", ok, f"U2 gap={gap2:.1e} U3 gap={gap3:.1e} min(U3-U2)={worst:.3e} ({dt:.2f}s)")


def _u3_definitional(f):
    """E_h1 E_h2 |E_n Delta_{h1} f(n) conj(Delta_{h1} f(n + h2))|^2, no Fourier transform."""
    p = len(f)
    idx = (np.arange(p)[:, None] + np.arange(p)[None, :]) % p
    total = 0.0
    for h1 in range(p):
        g = f * np.conj(np.roll(f, -h1))
        total += np.mean(np.abs(np.mean(g[None, :] * np.conj(g[idx]), axis=1)) ** 2)
    return (total / p) ** 0.125


def test_criterion_03_quadratic_phase(report):
    t = time.perf_counter()
    p = 601
    n = np.arange(p)
    f = np.exp(2j * np.pi * (n * n % p) / p)
    u2, u3 = u2_norm(f), u3_norm(f)
    u2_oracle, u3_oracle = u2_norm_direct(f), _u3_definitional(f)
    dt = time.perf_counter() - t
    ok = (
        abs(u3 - 1) < 1e-9
        and abs(u2 - p**-0.25) < 1e-9
        and abs(u3_oracle - 1) < 1e-9
        and abs(u2_oracle - p**-0.25) < 1e-9
        and dt < 10
    )
    report(3, "quadratic phase signature", ok, f"u2={u2:.12f} (target {p**-0.25:.12f}) u3={u3:.12f} ({dt:.2f}s)")


def test_criterion_04_kernel_suite(report):
    t = time.perf_counter()
    chain = [(1, 1, 1.0), (2, 1, 0.9), (2, 2, 0.8), (6, 2, 0.75), (6, 3, 0.7)]
    ok = True
    worst_spec = 0.0
    for p in (601, 1201):
        for Q, V, theta in chain:
            k = uniformity_kernel(p, Q, V, theta)
            ok &= k.values.min() >= 0 and abs(k.values.mean() - 1) < 1e-10
            worst_spec = max(worst_spec, float(np.max(np.abs(dft(k.values) - k.spectrum))))
        ok &= all(kernel_monotonicity(p, a, b) for a, b in zip(chain, chain[1:]))
    sizes = [(len(xi_set(601, *c)), len(xi_set(1201, *c))) for c in chain]
    ok &= all(a == b for a, b in sizes) and worst_spec < 1e-10
    dt = time.perf_counter() - t
    ok &= dt < 10
    report(4, "kernel suite", ok, f"max closed-form gap={worst_spec:.1e} |Xi|={[a for a, _ in sizes]} ({dt:.2f}s)")


def test_criterion_05_weak_u2(report):
    t = time.perf_counter()
    N, theta = 2000, 0.3
    mod = select_modulus(N, PAT.ell)
    fam = named_family()
    est = estimate_QV(N, mod.ntilde, theta, fam, ell=mod.ell)
    ok = True
    rows = []
    for chi in fam:
        s = truncate(chi, mod)
        res = u2_decompose(s, est.Q, est.V, theta)
        centered = u2_norm(s.values - np.mean(s.values))
        ok &= res.reconstruction_error(s) < 1e-12
        ok &= res.chi_s.sup_norm <= 1 + 1e-9
        ok &= res.measured_lipschitz <= res.R
        ok &= res.measured_u2 < centered
        rows.append(f"{chi.label.split(':')[0]}:{res.measured_u2:.4g}<{centered:.4g}")
    dt = time.perf_counter() - t
    ok &= dt < 60
    report(5, "weak U2 decomposition", ok, f"(Q,V)=({est.Q},{est.V}) R={res.R:.0f} " + " ".join(rows) + f" ({dt:.1f}s)")


def test_criterion_06_energy_increment(report):
    t = time.perf_counter()
    N, eps = 2000, 0.5
    mod = select_modulus(N, PAT.ell)
    fam = named_family()
    weights = [(c, 1 / len(fam)) for c in fam]
    J = steps_for(eps)
    sched = default_schedule(J + 1)
    qv = monotone_qv_schedule(N, mod, sched, fam)
    ok = True
    for chi in fam:
        s = truncate(chi, mod)
        res = u3_energy_decompose(s, sched, weights, eps, qv, mod)
        ok &= res.reconstruction_error(s) < 1e-12
    e = res.energies
    ok &= min(e) >= 0 and sum(e) <= 2 + 1e-9 and e[res.j0 - 2] <= eps**2 and res.weighted_l1_error <= eps
    dt = time.perf_counter() - t
    ok &= dt < 180
    report(
        6,
        "energy increment",
        ok,
        f"J={J} j0={res.j0} sum e={sum(e):.3e} e_j0={e[res.j0 - 2]:.3e} L1(chi_e)={res.weighted_l1_error:.3e} ({dt:.1f}s)",
    )


def test_criterion_07_parametric_exactness(report):
    t = time.perf_counter()
    p1, p2 = QuadraticForm(16, 9, -1), QuadraticForm(1, 1, -1, -1)
    ok = discriminants(p1) == (64, 36, 100) and discriminants(p2) == (4, 4, 4)
    pats = []
    for p in (p1, p2):
        ok &= p(*base_solution(p)) == 0
        ok &= parametric_family(p).residual(p) == 0
        pat, cert = normalize_to_ell(p, box=(5, 20))
        ok &= cert.identity_holds and cert.box_ok
        pats.append(pat.as_list())
    ok &= all(v["holds"] for v in verify_paper_identities().values())
    dt = time.perf_counter() - t
    ok &= dt < 5
    report(7, "parametric family exactness", ok, f"patterns={pats} ({dt:.2f}s)")


def test_criterion_08_sum_of_squares_obstructions(report):
    t = time.perf_counter()
    three = coloring_search(QuadraticForm(1, 1, -3), trivial_coloring(), 2000)
    five = coloring_search(QuadraticForm(1, 1, -5), seven_adic_coloring(), 5000)
    control = coloring_search(QuadraticForm(1, 1, -5), trivial_coloring(), 100)
    dt = time.perf_counter() - t
    ok = three == [] and five == [] and len(control) > 0 and dt < 60
    report(8, "sum-of-squares obstructions", ok, f"3n^2 hits={len(three)} 7-adic 5n^2 hits={len(five)} ({dt:.2f}s)")


def test_criterion_09_von_neumann(report):
    t = time.perf_counter()
    runs = [von_neumann_probe(seed, instances=20) for seed in range(3)]
    constants = [r["constant"] for r in runs]
    ok = all(r["ntilde"] == 601 and len(r["ratios"]) == 20 for r in runs)
    ok &= max(constants) <= 3 * min(constants)
    dt = time.perf_counter() - t
    ok &= dt < 120
    report(9, "von Neumann trend", ok, f"measured C per seed={[f'{c:.3e}' for c in constants]} ({dt:.1f}s)")


def test_criterion_10_positivity_probe(report):
    t = time.perf_counter()
    one = MultiplicativeFunction.one()
    counts_ok = True
    for N in (10, 100):
        p = select_modulus(N, PAT.ell).ntilde
        counts_ok &= abs(mixture_average([(one, 1.0)], PAT, N) * p * p - mixture_count_oracle(PAT, N, p)) < 1e-6
    values = {}
    for chi in named_family():
        values[chi.label] = [mixture_average([(chi, 1.0)], PAT, N).real for N in (100, 500, 1000)]
    negative = sorted(label for label, v in values.items() if min(v) <= 0)
    dt = time.perf_counter() - t
    ok = counts_ok and not negative and dt < 120
    shown = " ".join(f"{k.split(':')[0]}={[f'{x:.2e}' for x in v]}" for k, v in values.items())
    report(10, "positivity probe", ok, f"counting ok={counts_ok} non-positive={negative} {shown} ({dt:.1f}s)")
