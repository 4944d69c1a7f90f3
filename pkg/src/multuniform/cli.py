"""Command-line front end.

Every flag may also be supplied through the environment as
``MULTUNIFORM_<FLAG>`` (upper case, dashes as underscores, e.g.
``MULTUNIFORM_N=2000``); explicit flags win. Exit status: 0 success,
1 invalid input, 2 hypothesis or estimation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .experiments import (
    coloring_search,
    degenerate_count,
    dilate,
    folner_set,
    mixture_average,
    multiplicative_density,
    parse_coloring,
    parse_predicate,
    recurrence_average,
    theta_set,
)
from .gowers import LinearFormsPattern, u2_norm, u3_norm
from .katai import default_test_family, frequency_scan, katai_statistic, quadratic_phase_correlation
from .kernels import (
    EstimationError,
    default_schedule,
    estimate_QV,
    monotone_qv_schedule,
    steps_for,
    u2_decompose,
    u3_energy_decompose,
)
from .multiplicative import (
    MultiplicativeFunction,
    evaluate_range,
    named_family,
    parse_chi,
    truncate,
)
from .quadforms import (
    EllPattern,
    FactorizationError,
    HypothesisError,
    QuadraticForm,
    base_solution,
    check_hypothesis,
    discriminants,
    normalize_to_ell,
    parametric_family,
)
from .ring import select_modulus

ENV_PREFIX = "MULTUNIFORM_"
SUBCOMMANDS = ("gowers", "decompose", "katai", "qcorr", "quadform", "average", "density", "search", "selftest")
EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(ValueError):
    pass


class _Flagged(Exception):
    """Successful run whose result must still be flagged with exit 2."""


@dataclass
class RunConfig:
    subcommand: str
    parameters: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output: str = "-"
    format: str = "json"

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        if not -(2**63) <= self.seed < 2**63:
            raise UsageError("seed must fit in 64 bits")

    def get(self, key: str, default: Any = None) -> Any:
        v = self.parameters.get(key)
        return default if v is None else v

    def need(self, key: str) -> Any:
        v = self.parameters.get(key)
        if v is None:
            raise UsageError(f"--{key.replace('_', '-')} is required for {self.subcommand}")
        return v


# helpers


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def dump_json(obj: Any) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def dump_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _chi(cfg: RunConfig) -> MultiplicativeFunction:
    spec = cfg.get("chi", "minus-at-2")
    if spec == "random":
        spec = f"random:{cfg.seed}"
    return parse_chi(spec)


def _pattern(cfg: RunConfig) -> LinearFormsPattern:
    return LinearFormsPattern.parse(cfg.get("ell", "1,2,3"))


def _read_lines(path: str) -> list[str]:
    lines = []
    for raw in Path(path).read_text().splitlines():
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append(s)
    return lines


def load_schedule(path: str) -> list[float]:
    """One theta per line; blank lines and ``#`` comments ignored."""
    return [float(s) for s in _read_lines(path)]


def load_family(path: str, seed: int = 0) -> list[tuple[MultiplicativeFunction, float]]:
    """``<chi spec> [weight]`` per line; missing weights share the remainder equally."""
    entries = []
    for s in _read_lines(path):
        parts = s.split()
        spec = parts[0] if parts[0] != "random" else f"random:{seed}"
        w = float(parts[1]) if len(parts) > 1 else None
        entries.append((parse_chi(spec), w))
    if not entries:
        raise UsageError(f"family file {path} is empty")
    given = sum(w for _, w in entries if w is not None)
    free = sum(1 for _, w in entries if w is None)
    share = (1.0 - given) / free if free else 0.0
    return [(c, share if w is None else w) for c, w in entries]


def _family(cfg: RunConfig) -> list[tuple[MultiplicativeFunction, float]]:
    if cfg.get("family"):
        return load_family(cfg.get("family"), cfg.seed)
    fam = named_family()
    return [(c, 1.0 / len(fam)) for c in fam]


def _modulus(cfg: RunConfig):
    N = int(cfg.need("N"))
    return N, _pattern(cfg), select_modulus(N, _pattern(cfg).ell)


# subcommands; each returns (json document, csv header, csv rows)

Result = tuple[dict, list[str] | None, list[list[Any]] | None]


def cmd_gowers(cfg: RunConfig) -> Result:
    N, pat, mod = _modulus(cfg)
    chi = _chi(cfg)
    sig = truncate(chi, mod)
    u2 = u2_norm(sig)
    u3 = u3_norm(sig, threads=int(cfg.get("threads", 1)))
    doc = {"chi": chi.label, "N": N, "ell": list(pat.coeffs), "ntilde": mod.ntilde, "u2": u2, "u3": u3}
    spec = sig.spectrum
    rows = [[xi, float(z.real), float(z.imag)] for xi, z in enumerate(spec)]
    return doc, ["xi", "re", "im"], rows


def _qv(cfg: RunConfig, N: int, mod, theta: float) -> tuple[int, int, str]:
    Q, V = cfg.get("Q"), cfg.get("V")
    if Q is not None and V is not None:
        return int(Q), int(V), "override"
    fam = [c for c, _ in _family(cfg)]
    est = estimate_QV(N, mod.ntilde, theta, fam, ell=mod.ell)
    return int(Q if Q is not None else est.Q), int(V if V is not None else est.V), "estimated"


def cmd_decompose(cfg: RunConfig) -> Result:
    N, pat, mod = _modulus(cfg)
    chi = _chi(cfg)
    sig = truncate(chi, mod)
    measure_u3 = bool(cfg.get("u3", False))
    eps = cfg.get("epsilon")
    if eps is None:
        theta = float(cfg.get("theta", 0.3))
        Q, V, source = _qv(cfg, N, mod, theta)
        res = u2_decompose(sig, Q, V, theta, measure_u3=measure_u3)
        mode = "u2"
    else:
        eps = float(eps)
        J = steps_for(eps)
        sched = load_schedule(cfg.get("schedule")) if cfg.get("schedule") else default_schedule(J + 1)
        weights = _family(cfg)
        if cfg.get("Q") is not None and cfg.get("V") is not None:
            qv = [(int(cfg.get("Q")), int(cfg.get("V")))] * len(sched)
            source = "override"
        else:
            qv = monotone_qv_schedule(N, mod, sched, [c for c, _ in weights])
            source = "estimated"
        res = u3_energy_decompose(sig, sched, weights, eps, qv, mod, measure_u3=measure_u3)
        mode = "u3-energy"
    doc = {
        "chi": chi.label,
        "N": N,
        "ntilde": mod.ntilde,
        "mode": mode,
        "qv_source": source,
        "reconstruction_error": res.reconstruction_error(sig),
        "lipschitz_bound": res.R,
        "u2_centered": u2_norm(sig.values - np.mean(sig.values)),
        **res.summary(),
    }
    rows = [
        [n, float(s.real), float(s.imag), float(u.real), float(u.imag), float(e.real), float(e.imag)]
        for n, (s, u, e) in enumerate(zip(res.chi_s.values, res.chi_u.values, res.chi_e.values))
    ]
    return doc, ["n", "s_re", "s_im", "u_re", "u_im", "e_re", "e_im"], rows


def cmd_katai(cfg: RunConfig) -> Result:
    N = int(cfg.need("N"))
    chi = _chi(cfg)
    K0, K = int(cfg.get("K0", 10)), int(cfg.get("K", 40))
    fam = [c for c, _ in load_family(cfg.get("family"), cfg.seed)] if cfg.get("family") else default_test_family(50, cfg.seed)
    rep = katai_statistic(evaluate_range(chi, N), K0, K, family=fam)
    doc = {"chi": chi.label, "N": N, **rep.as_dict()}
    rows = [[p, q, v] for (p, q), v in rep.pair_values.items()]
    return doc, ["p", "p_prime", "value"], rows


def cmd_qcorr(cfg: RunConfig) -> Result:
    N, pat, mod = _modulus(cfg)
    chi = _chi(cfg)
    sig = truncate(chi, mod)
    theta = float(cfg.get("theta", 0.3))
    Q, V, source = _qv(cfg, N, mod, theta)
    res = u2_decompose(sig, Q, V, theta)
    grid = cfg.get("grid")
    grid = int(grid) if grid is not None else None
    a_u, v_u = quadratic_phase_correlation(res.chi_u, grid_size=grid)
    a_n, v_n = quadratic_phase_correlation(sig, grid_size=grid)
    scan = frequency_scan(sig, float(cfg.get("scan_theta", 0.2)) * N / mod.ntilde, Q_cap=int(cfg.get("Q_cap", 12)))
    doc = {
        "chi": chi.label,
        "N": N,
        "ntilde": mod.ntilde,
        "Q": Q,
        "V": V,
        "qv_source": source,
        "theta": theta,
        "chi_u": {"alpha": a_u, "value": v_u},
        "chi_N": {"alpha": a_n, "value": v_n},
        "large_frequencies": [
            {"xi": e.xi, "magnitude": e.magnitude, "best_Q": e.best_Q, "distance": e.distance} for e in scan[:20]
        ],
    }
    rows = [[e.xi, e.magnitude, e.best_Q, e.distance] for e in scan]
    return doc, ["xi", "magnitude", "best_Q", "distance"], rows


def cmd_quadform(cfg: RunConfig) -> Result:
    p = QuadraticForm.parse(cfg.need("form"))
    status = check_hypothesis(p)
    doc: dict[str, Any] = {
        "form": list(p.coeffs),
        "deltas": list(discriminants(p)),
        "hypothesis": str(status),
    }
    if status.satisfied:
        fam = parametric_family(p)
        pat, cert = normalize_to_ell(p)
        doc.update(
            base_solution=list(base_solution(p)),
            family={"x": list(fam.x_coeffs), "y": list(fam.y_coeffs), "z": list(fam.z_coeffs)},
            pattern=pat.as_list(),
            certificate=cert.summary(),
        )
    rows = [[k, v] for k, v in zip("abcdef", p.coeffs)]
    if not status.satisfied:
        raise _Flagged(doc)
    return doc, ["coeff", "value"], rows


def cmd_average(cfg: RunConfig) -> Result:
    N = int(cfg.need("N"))
    pat = _pattern(cfg)
    mod = select_modulus(N, pat.ell)
    if cfg.get("chi") and not cfg.get("family"):
        weights = [(_chi(cfg), 1.0)]
    else:
        weights = _family(cfg)
    members = []
    for chi, w in weights:
        members.append(
            {
                "chi": chi.label,
                "weight": w,
                "recurrence": recurrence_average(chi, pat, N),
                "mixture": mixture_average([(chi, 1.0)], pat, N, mod.ntilde),
            }
        )
    mix = sum(m["weight"] * m["mixture"] for m in members)
    doc = {
        "N": N,
        "ell": list(pat.coeffs),
        "ntilde": mod.ntilde,
        "theta_size": len(theta_set(N, pat)),
        "degenerate": degenerate_count(pat, N),
        "mixture": complex(mix),
        "members": members,
    }
    rows = [
        [m["chi"], m["weight"], m["recurrence"].real, m["recurrence"].imag, m["mixture"].real, m["mixture"].imag]
        for m in members
    ]
    return doc, ["chi", "weight", "recurrence_re", "recurrence_im", "mixture_re", "mixture_im"], rows


def cmd_density(cfg: RunConfig) -> Result:
    depth, cap = int(cfg.get("depth", 3)), int(cfg.get("cap", 10))
    pred_text = cfg.get("predicate", "odd")
    pred = parse_predicate(pred_text)
    k = int(cfg.get("dilation", 2))
    size = len(folner_set(depth, cap))
    d = multiplicative_density(pred, depth, cap)
    dk = multiplicative_density(dilate(pred, k), depth, cap)
    doc = {"predicate": pred_text, "depth": depth, "cap": cap, "size": size, "density": d, "dilation": k, "dilated_density": dk}
    rows = [[c, multiplicative_density(pred, depth, c)] for c in range(1, cap + 1)]
    return doc, ["cap", "density"], rows


def cmd_search(cfg: RunConfig) -> Result:
    coloring = parse_coloring(cfg.get("coloring", "trivial"))
    bound = int(cfg.need("bound"))
    form = QuadraticForm.parse(cfg.get("form")) if cfg.get("form") else None
    if cfg.get("pattern"):
        vals = [int(t) for t in cfg.get("pattern").split(",")]
        if len(vals) != 4:
            raise UsageError("--pattern takes l0,l1,l2,l3")
        hits = coloring_search(EllPattern(*vals), coloring, bound, form=form)
        target = {"pattern": vals}
    elif form is not None:
        hits = coloring_search(form, coloring, bound)
        target = {"form": list(form.coeffs)}
    else:
        raise UsageError("search needs --form or --pattern")
    limit = int(cfg.get("limit", 100))
    doc = {
        **target,
        "coloring": coloring.label,
        "bound": bound,
        "count": len(hits),
        "hits": [{"x": h.x, "y": h.y, "n": h.n, "cell": h.cell} for h in hits[:limit]],
    }
    rows = [[h.x, h.y, h.n, h.cell] for h in hits]
    return doc, ["x", "y", "n", "cell"], rows


def cmd_selftest(cfg: RunConfig) -> Result:
    from .selftest import run_checks

    checks = run_checks(seed=cfg.seed)
    doc = {"passed": all(c["passed"] for c in checks), "checks": checks}
    rows = [[c["name"], c["passed"], c["detail"]] for c in checks]
    if not doc["passed"]:
        raise _Flagged(doc)
    return doc, ["name", "passed", "detail"], rows


COMMANDS: dict[str, Callable[[RunConfig], Result]] = {
    "gowers": cmd_gowers,
    "decompose": cmd_decompose,
    "katai": cmd_katai,
    "qcorr": cmd_qcorr,
    "quadform": cmd_quadform,
    "average": cmd_average,
    "density": cmd_density,
    "search": cmd_search,
    "selftest": cmd_selftest,
}


def _emit(cfg: RunConfig, doc: dict, header, rows) -> None:
    if cfg.format == "csv" and header is not None:
        text = dump_csv(header, rows)
    else:
        text = dump_json(doc)
    if cfg.output in ("-", ""):
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:  # reader went away (e.g. piped into head)
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    else:
        Path(cfg.output).write_text(text)


def _error(kind: str, exc: BaseException, status: int) -> int:
    payload = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    best = getattr(exc, "best", None)
    if best is not None:
        payload["best"] = list(best)
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return status


def run(cfg: RunConfig) -> int:
    try:
        doc, header, rows = COMMANDS[cfg.subcommand](cfg)
    except _Flagged as flagged:
        _emit(cfg, flagged.args[0], None, None)
        return EXIT_FAILED
    except (EstimationError, HypothesisError, FactorizationError) as exc:
        return _error("failure", exc, EXIT_FAILED)
    except (ValueError, OSError, TypeError) as exc:
        return _error("invalid-input", exc, EXIT_INVALID)
    _emit(cfg, doc, header, rows)
    return EXIT_OK


# argument parsing

# (flag, type, help)
FLAGS: list[tuple[str, type, str]] = [
    ("chi", str, "one|minus-at-2|phase:<a>|random[:<seed>]|charlike:<q>"),
    ("N", int, "truncation length"),
    ("ell", str, "l1,l2,l3 (default 1,2,3)"),
    ("theta", float, "kernel scale theta in (0, 1]"),
    ("Q", int, "override Q"),
    ("V", int, "override V"),
    ("epsilon", float, "energy-increment tolerance; selects the U3 mode of decompose"),
    ("schedule", str, "file with one theta per line"),
    ("family", str, "file with '<chi> [weight]' per line"),
    ("form", str, "a,b,c,d,e,f"),
    ("pattern", str, "l0,l1,l2,l3 for search"),
    ("coloring", str, "7adic|residue:<q>|trivial"),
    ("bound", int, "search box"),
    ("limit", int, "max hits listed in JSON"),
    ("K0", int, "katai lower prime bound"),
    ("K", int, "katai upper prime bound"),
    ("grid", int, "qcorr grid size"),
    ("depth", int, "Folner depth"),
    ("cap", int, "Folner exponent cap"),
    ("predicate", str, "all|odd|even|residue:<r>:<q>"),
    ("dilation", int, "dilation factor for the invariance probe"),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit 2; invalid input is 1
        raise UsageError(message)


def _env(name: str, env: dict[str, str]) -> str | None:
    return env.get(ENV_PREFIX + name.upper().replace("-", "_"))


def build_parser(env: dict[str, str] | None = None) -> argparse.ArgumentParser:
    env = dict(os.environ) if env is None else env
    parser = _Parser(prog="multuniform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        for flag, typ, help_ in FLAGS:
            default = _env(flag, env)
            p.add_argument(f"--{flag}", type=typ, default=typ(default) if default is not None else None, help=help_)
        p.add_argument("--u3", action="store_true", default=_env("u3", env) in ("1", "true"))
        seed = _env("seed", env)
        p.add_argument("--seed", type=int, default=int(seed) if seed is not None else 0)
        threads = _env("threads", env)
        p.add_argument("--threads", type=int, default=int(threads) if threads else (os.cpu_count() or 1))
        p.add_argument("--format", choices=("json", "csv"), default=_env("format", env) or "json")
        p.add_argument("--out", default=_env("out", env) or "-")
    return parser


def config_from_args(argv: list[str] | None = None, env: dict[str, str] | None = None) -> RunConfig:
    ns = vars(build_parser(env).parse_args(argv))
    sub = ns.pop("subcommand")
    seed, out, fmt = ns.pop("seed"), ns.pop("out"), ns.pop("format")
    if ns.get("threads") is not None and ns["threads"] < 1:
        raise UsageError("--threads must be positive")
    for key in ("N", "bound", "K0", "K", "Q", "V", "depth", "cap", "dilation", "grid", "limit"):
        if ns.get(key) is not None and ns[key] < 1:
            raise UsageError(f"--{key} must be positive")
    if ns.get("theta") is not None and not 0 < ns["theta"] <= 1:
        raise UsageError("--theta must lie in (0, 1]")
    if ns.get("epsilon") is not None and not 0 < ns["epsilon"] <= 2:
        raise UsageError("--epsilon must lie in (0, 2]")
    if ns.get("theta") is not None and not math.isfinite(ns["theta"]):
        raise UsageError("--theta must be finite")
    return RunConfig(sub, ns, seed=seed, output=out, format=fmt)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        return _error("invalid-input", exc, EXIT_INVALID)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
