"""Command-line front end: config-driven traces, figure presets and oracle
cross-checks, all written as CSV.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 oracle
tolerance breach.
"""
import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import _backend
from .decoherence import (QubitPureState, QubitSplitting, ThermalBath,
                          _bath_samples, coherence_bracket, trace)
from .errors import (ConfigError, CutoffError, DimensionError, DomainError,
                     PTDephaseError, QuadratureError)
from .model import Hermiticity
from .oracle import (DiscreteBath, FockConfig, FockOracle, discretize,
                     gamma1_discrete, phi_discrete)
from .quadrature import (QuadratureSpec, SpectralDensity, integrate_gamma1_kernel,
                         integrate_phi_kernel)

log = logging.getLogger("ptdephase")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ORACLE = 0, 1, 2, 3
CSV_HEADER = "t,gamma1,gamma_c,phi,chi,abs_F,re_rho01,im_rho01"
DEFAULT_ALPHAS = (0.0, 0.5, 0.8, 0.95, 1.0)
PRESET_S = {"a": 0.2, "b": 1.0, "c": 2.0}

QUAD_TOL = 1e-3
FOCK_UNCORRELATED_TOL = 1e-8
FOCK_CORRELATED_TOL = 1e-6


@dataclass
class ScenarioConfig:
    s: float = 1.0
    lambda_s: float = 1.0
    Omega: float = 1.0
    beta: float = 1.0
    omega0: object = 1.0          # number, or "consistent"
    alpha_list: list = field(default_factory=lambda: list(DEFAULT_ALPHAS))
    a: object = None              # complex amplitude, [re, im] or number
    b: object = None
    sz: float = 0.0
    correlated: bool = True
    t_max: float = 20.0
    n_samples: int = 2001
    rel_tol: float = 1e-9
    name: str = "trace"
    fock_modes: list = field(default_factory=lambda: [[1.0, 0.4]])
    fock_n_cut: int = 40

    # -- derived objects, each re-validating its own invariants --

    def validate(self):
        try:
            self.spectral_density()
            self.thermal_bath()
            self.state()
            self.quadrature()
            self.times()
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if not isinstance(self.alpha_list, list) or not self.alpha_list:
            raise ConfigError("alpha_list: must be a non-empty list")
        for a in self.alpha_list:
            if not isinstance(a, (int, float)) or not -1.0 <= a <= 1.0:
                raise ConfigError(f"alpha_list: value {a!r} outside [-1, 1]")
        if self.omega0 != "consistent":
            if not isinstance(self.omega0, (int, float)) or not self.omega0 > 0:
                raise ConfigError(f"omega0: expected a positive number or "
                                  f"'consistent', got {self.omega0!r}")
        if not isinstance(self.correlated, bool):
            raise ConfigError("correlated: expected true/false")
        if int(self.fock_n_cut) < 1:
            raise ConfigError("fock_n_cut: must be >= 1")
        try:
            DiscreteBath.from_modes(self.fock_modes)
        except (DomainError, TypeError, IndexError) as exc:
            raise ConfigError(f"fock_modes: {exc}") from exc
        return self

    def spectral_density(self):
        return SpectralDensity(self.s, self.lambda_s, self.Omega)

    def thermal_bath(self):
        return ThermalBath(self.beta)

    def state(self):
        if self.a is None and self.b is None:
            return QubitPureState.from_sz(float(self.sz))
        if self.a is None or self.b is None:
            raise DomainError("a/b: give both amplitudes or neither")
        return QubitPureState(_complex(self.a, "a"), _complex(self.b, "b"))

    def splitting(self, h):
        if self.omega0 == "consistent":
            return QubitSplitting.consistent(h)
        return QubitSplitting(self.omega0)

    def quadrature(self):
        return QuadratureSpec(rel_tol=float(self.rel_tol))

    def times(self):
        n = int(self.n_samples)
        if n < 1:
            raise DomainError("n_samples: must be >= 1")
        if not float(self.t_max) >= 0:
            raise DomainError("t_max: must be >= 0")
        if n == 1:
            return np.array([0.0]) if self.t_max == 0 else np.array([float(self.t_max)])
        return np.linspace(0.0, float(self.t_max), n)


def _complex(v, name):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise DomainError(f"{name}: expected a number or [re, im], got {v!r}")


def _parse_value(raw):
    raw = raw.strip()
    if raw.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw.strip("'\"")


def parse_config(text):
    """Parse ``key = value`` lines (JSON values, ``#`` comments)."""
    known = {f.name for f in fields(ScenarioConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (p.strip() for p in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(raw)
    try:
        cfg = ScenarioConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def dump_config(cfg):
    """Inverse of ``parse_config``."""
    lines = []
    for k, v in asdict(cfg).items():
        lines.append(f"{k} = {json.dumps(v)}")
    return "\n".join(lines) + "\n"


def preset(figure, panel):
    """Preset parameters: beta omega0 = 1, Omega beta = 1, <sigma_z> = 0,
    with beta = 1 fixing the units and lambda_s = 1."""
    if panel not in PRESET_S:
        raise ConfigError(f"panel must be one of a, b, c; got {panel!r}")
    return ScenarioConfig(s=PRESET_S[panel], lambda_s=1.0, Omega=1.0, beta=1.0,
                          omega0=1.0, sz=0.0, correlated=True, t_max=20.0,
                          n_samples=2001, name=f"{figure}{panel}").validate()


# --- trace -------------------------------------------------------------------

def _fmt(x):
    return "%.17g" % x


def trace_csv(tr):
    rows = [CSV_HEADER]
    for i in range(len(tr.times)):
        c = tr.rho01[i]
        rows.append(",".join(_fmt(v) for v in (
            tr.times[i], tr.gamma1[i], tr.gamma_c[i], tr.phi[i], tr.chi[i],
            abs(tr.F[i]), c.real, c.imag)))
    return "\n".join(rows) + "\n"


def alpha_tag(alpha):
    return f"{alpha:g}"


def _one_alpha(cfg, alpha):
    h = Hermiticity(alpha)
    if cfg.omega0 == "consistent" and abs(alpha) == 1.0:
        split = QubitSplitting(1.0)  # unused: correlation terms vanish at |alpha| = 1
    else:
        split = cfg.splitting(h)
    try:
        return trace(cfg.spectral_density(), cfg.thermal_bath(), h, split, cfg.state(),
                     cfg.times(), correlated=cfg.correlated, q=cfg.quadrature())
    except PTDephaseError as exc:
        t = getattr(exc, "t", None)
        raise QuadratureError(f"alpha={alpha:g}, t={t!r}: {exc}",
                              math.nan, math.nan) from exc


def run_trace(cfg, out_dir, threads=1):
    """Write one CSV per alpha plus ``run_config.txt``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    times = cfg.times()
    # shared alpha-independent integrals, computed once before fanning out
    try:
        _bath_samples(cfg.spectral_density(), cfg.thermal_bath().beta,
                      tuple(times.tolist()), cfg.quadrature())
    except PTDephaseError as exc:
        raise QuadratureError(f"bath integrals failed: {exc}", math.nan, math.nan) from exc
    alphas = list(cfg.alpha_list)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            traces = list(pool.map(lambda a: _one_alpha(cfg, a), alphas))
    else:
        traces = [_one_alpha(cfg, a) for a in alphas]
    paths = []
    for alpha, tr in zip(alphas, traces):
        p = out_dir / f"{cfg.name}_alpha{alpha_tag(alpha)}.csv"
        p.write_text(trace_csv(tr))
        paths.append(p)
    (out_dir / "run_config.txt").write_text(dump_config(cfg))
    return paths


# --- oracle check --------------------------------------------------------------

def _rel_dev(approx, ref):
    approx, ref = np.asarray(approx), np.asarray(ref)
    floor = 1e-9 * max(float(np.max(np.abs(ref))), 1e-300) + 1e-15
    return float(np.max(np.abs(approx - ref) / np.maximum(np.abs(ref), floor)))


def _subsample(times, n=201):
    if len(times) <= n:
        return times
    idx = np.unique(np.linspace(0, len(times) - 1, n).round().astype(int))
    return times[idx]


def run_oracle_check(cfg, modes=10_000, fock=False, out=sys.stdout):
    """Print deviations of the analytic side from both oracles.

    Returns the list of ``(label, deviation, tolerance)`` triples.
    """
    sd = cfg.spectral_density()
    beta = cfg.thermal_bath().beta
    q = cfg.quadrature()
    times = cfg.times()
    grid = "power" if sd.s < 1 else "uniform"
    disc = discretize(sd, modes, grid=grid)
    g_quad = np.array([integrate_gamma1_kernel(sd, beta, t, q) for t in times])
    p_quad = np.array([integrate_phi_kernel(sd, t, q) for t in times])
    g_disc = gamma1_discrete(disc, beta, 0.0, times)
    p_disc = phi_discrete(disc, times)
    results = [
        (f"gamma1 quadrature vs {modes}-mode sum ({grid} grid)", _rel_dev(g_disc, g_quad), QUAD_TOL),
        (f"phi quadrature vs {modes}-mode sum ({grid} grid)", _rel_dev(p_disc, p_quad), QUAD_TOL),
    ]
    if fock:
        bath = DiscreteBath.from_modes(cfg.fock_modes)
        fc = FockConfig(int(cfg.fock_n_cut), len(bath))
        state = cfg.state()
        ts = _subsample(times)
        ab = state.coherence0
        for alpha in cfg.alpha_list:
            if abs(alpha) >= 1.0:
                continue
            h = Hermiticity(alpha)
            ora = FockOracle(bath, fc, beta, h, state, correlated=False)
            c = np.array([ora.offdiag(t) for t in ts])
            ref = abs(ab) * np.exp(-gamma1_discrete(bath, beta, h, ts))
            results.append((f"Fock uncorrelated |rho01|, alpha={alpha:g}",
                            float(np.max(np.abs(np.abs(c) - ref))), FOCK_UNCORRELATED_TOL))
            if ab == 0:
                continue
            ora = FockOracle(bath, fc, beta, h, state, correlated=True)
            split = QubitSplitting.consistent(h)
            fk = np.array([ora.offdiag(t) for t in ts]) / ab
            theta = h.prefactor * phi_discrete(bath, ts)
            g1 = gamma1_discrete(bath, beta, h, ts)
            fa = np.array([coherence_bracket(th, split, ThermalBath(beta), state)
                           for th in theta]) * np.exp(-g1)
            results.append((f"Fock correlated F (consistent omega0), alpha={alpha:g}",
                            float(np.max(np.abs(fk - fa))), FOCK_CORRELATED_TOL))
    for label, dev, tol in results:
        status = "PASS" if dev < tol else "FAIL"
        print(f"{status}  {label}: max dev {dev:.3e} (tol {tol:g})", file=out)
    return results


# --- entry point ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="cap on concurrent alpha evaluations (default 1)")
    common.add_argument("--tol", type=float, default=None,
                        help="relative quadrature tolerance (overrides config)")
    p = argparse.ArgumentParser(
        prog="ptdephase", parents=[common],
        description="Exact dephasing of a PT-symmetric qubit in a bosonic bath")
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("trace", parents=[common], help="run a config file")
    t.add_argument("--config", required=True)
    t.add_argument("--out-dir", default=".")
    for fig in ("fig1", "fig2"):
        f = sub.add_parser(fig, parents=[common], help=f"reproduce {fig} panel data")
        f.add_argument("panel", choices=sorted(PRESET_S))
        f.add_argument("--out-dir", default=".")
    o = sub.add_parser("oracle-check", parents=[common],
                       help="compare analytic results with both oracles")
    o.add_argument("--config", required=True)
    o.add_argument("--modes", type=int, default=10_000)
    o.add_argument("--fock", action="store_true")
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    threads = 1 if args.threads is None else args.threads
    try:
        if args.command in ("fig1", "fig2"):
            cfg = preset(args.command, args.panel)
        else:
            cfg = load_config(args.config)
        if args.tol is not None:
            cfg = replace(cfg, rel_tol=args.tol).validate()
        if threads < 1:
            raise ConfigError("--threads must be >= 1")
    except (ConfigError, DomainError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    try:
        if args.command == "oracle-check":
            results = run_oracle_check(cfg, modes=args.modes, fock=args.fock)
            return EXIT_ORACLE if any(d >= tol for _, d, tol in results) else EXIT_OK
        paths = run_trace(cfg, args.out_dir, threads=threads)
        for p in paths:
            print(p)
        log.info("backend: %s", _backend.BACKEND)
        return EXIT_OK
    except (CutoffError, DimensionError, QuadratureError) as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    except DomainError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
