"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; in the
latter case the lines are repeated in the terminal summary.
"""
import math
import subprocess
import sys

import numpy as np
import pytest

from ptdephase.cli import main, preset
from ptdephase.decoherence import (QubitPureState, QubitSplitting, ThermalBath, _bath_samples,
                                   chi_ratio, coherence_bracket, gamma1, gamma1_ohmic_closed,
                                   phi, trace)
from ptdephase.model import Hermiticity
from ptdephase.oracle import (DiscreteBath, FockConfig, FockOracle, discretize,
                              gamma1_discrete, phi_discrete)
from ptdephase.quadrature import SpectralDensity, integrate_gamma1_kernel, integrate_phi_kernel

RESULTS = []
ALPHAS = (0.0, 0.5, 0.8, 0.95, 1.0)
FIG_GRID = np.linspace(0.0, 20.0, 2001)


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _rel(a, b, floor=1e-12):
    return np.abs(a - b) / np.maximum(np.abs(b), floor)


def _figure_trace(s, alpha, times=FIG_GRID):
    cfg = preset("fig1", {0.2: "a", 1.0: "b", 2.0: "c"}[s])
    h = Hermiticity(alpha)
    return trace(cfg.spectral_density(), cfg.thermal_bath(), h, cfg.splitting(h), cfg.state(),
                 times, q=cfg.quadrature())


def _local_minima(y):
    return np.flatnonzero((y[1:-1] < y[:-2]) & (y[1:-1] < y[2:])) + 1


def _extrema(y):
    d = np.sign(np.diff(y))
    d = d[d != 0]
    return int(np.count_nonzero(d[1:] != d[:-1]))


def test_1_ohmic_closed_form():
    sd = SpectralDensity(1.0, 1.0, 1.0)
    times = np.linspace(0.0, 20.0, 200)
    worst_g = worst_p = worst_pq = 0.0
    for beta in (1.0, 5.0, math.inf):
        for a in (0.0, 0.5, 0.95):
            for t in times:
                g = gamma1(sd, beta, a, t)
                ref = gamma1_ohmic_closed(1.0, 1.0, beta, a, t)
                worst_g = max(worst_g, abs(g - ref) / max(g, 1e-12))
    for t in times:
        exact = math.atan(t)
        worst_p = max(worst_p, abs(phi(sd, t) - exact))
        worst_pq = max(worst_pq, abs(integrate_phi_kernel(sd, t) - exact))
    ok = worst_g < 1e-7 and worst_p < 1e-9 and worst_pq < 1e-9
    report(1, ok, f"ohmic gamma1 max rel dev {worst_g:.2e} (<1e-7); phi max abs dev "
                  f"{worst_p:.2e} fast path, {worst_pq:.2e} quadrature (<1e-9)")


def test_2_freeze_at_exceptional_point():
    times = np.linspace(0.0, 20.0, 401)
    state = QubitPureState.from_sz(0.3, phase=0.2)
    bad = []
    for s in (0.2, 0.5, 1.0, 2.0, 3.0):
        for beta in (0.5, 1.0, math.inf):
            for alpha in (1.0, -1.0):
                tr = trace(SpectralDensity(s), beta, alpha, QubitSplitting(1.0), state, times)
                if (tr.gamma1.any() or tr.gamma_c.any() or tr.chi.any()
                        or np.any(tr.F != 1.0)):
                    bad.append((s, beta, alpha))
    report(2, not bad, f"alpha = +-1: gamma1 = gamma_c = chi = 0 and F = 1 exactly "
                       f"(5 spectral densities x 3 temperatures); failures {bad}")


def test_3_scaling_law():
    worst = 0.0
    times = np.linspace(0.1, 20.0, 40)
    for s in (0.2, 1.0, 2.0):
        sd = SpectralDensity(s)
        for beta in (1.0, math.inf):
            for t in times:
                base = gamma1(sd, beta, 0.0, t)
                for a in (0.3, 0.5, 0.8, 0.95, 0.99, 1.0):
                    worst = max(worst, abs(gamma1(sd, beta, a, t) - (1 - a * a) * base)
                                / max((1 - a * a) * base, 1e-300) if a != 1.0
                                else abs(gamma1(sd, beta, a, t)))
    report(3, worst < 1e-12, f"gamma1(alpha) = (1 - alpha^2) gamma1(0): max rel dev {worst:.2e} "
                             f"(<1e-12)")


def test_4_factorisation_identities():
    times = np.linspace(0.0, 20.0, 201)
    worst_abs = worst_mod = worst_tan = 0.0
    for s in (0.2, 1.0, 2.0):
        sd = SpectralDensity(s)
        for beta in (0.3, 1.0, 5.0, math.inf):
            for omega0 in (0.5, 1.0, 3.0):
                for sz in (-0.7, 0.0, 0.5, 0.95):
                    state = QubitPureState.from_sz(sz, phase=0.4)
                    for alpha in (0.0, 0.5, 0.95):
                        split = QubitSplitting(omega0)
                        tr = trace(sd, beta, alpha, split, state, times)
                        worst_abs = max(worst_abs, float(np.max(np.abs(
                            tr.abs_F - np.exp(-tr.gamma1 - tr.gamma_c)))))
                        th = (1 - alpha ** 2) * tr.phi
                        r = chi_ratio(split, ThermalBath(beta), sz)
                        rhs = np.cos(th) ** 2 + r * r * np.sin(th) ** 2
                        worst_mod = max(worst_mod, float(np.max(np.abs(
                            np.exp(-2.0 * tr.gamma_c) - rhs))))
                        # tan chi = -+ r tan theta, away from the poles of tan
                        m = np.abs(np.cos(th)) > 1e-3
                        c = np.cos(tr.chi[m])
                        lhs = np.sin(tr.chi[m]) * np.cos(th[m])
                        worst_tan = max(worst_tan, float(np.max(np.abs(
                            np.abs(lhs) - np.abs(r * np.sin(th[m]) * c)), initial=0.0)))
    ok = worst_abs < 1e-10 and worst_mod < 1e-12 and worst_tan < 1e-10
    report(4, ok, f"|F| = exp(-gamma1 - gamma_c) max dev {worst_abs:.2e} (<1e-10); "
                  f"exp(-2 gamma_c) identity max dev {worst_mod:.2e} (<1e-12); "
                  f"|tan chi| = |r tan theta| max dev {worst_tan:.2e}")


def test_5_discrete_mode_oracle():
    t = FIG_GRID[1:]
    lines, ok = [], True
    for s, grid, small in ((0.2, "power", 100), (1.0, "uniform", 50_000), (2.0, "uniform", 50_000)):
        sd = SpectralDensity(s)
        g_ref = np.array([integrate_gamma1_kernel(sd, 1.0, x) for x in t])
        p_ref = np.array([integrate_phi_kernel(sd, x) for x in t])

        def dev(K):
            b = discretize(sd, K, grid=grid)
            return (float(np.max(_rel(gamma1_discrete(b, 1.0, 0.0, t), g_ref))),
                    float(np.max(_rel(phi_discrete(b, t), p_ref))))

        d_full = dev(100_000)
        d_half, d_double = dev(small), dev(2 * small)
        within = max(d_full) < 1e-3
        shrinking = d_double[0] < d_half[0] and d_double[1] < d_half[1]
        ok &= within and shrinking
        lines.append(f"s={s:g} ({grid}) K=1e5 dev {max(d_full):.1e}, K={small}->{2 * small} "
                     f"{max(d_half):.1e}->{max(d_double):.1e}")
    report(5, ok, "; ".join(lines))


def _two_mode_bath():
    return DiscreteBath([1.0, 1.7], [0.4, 0.3]), FockConfig(24, 2)


def test_6_fock_uncorrelated():
    ts = np.linspace(0.0, 20.0, 81)
    state = QubitPureState.from_sz(0.0, phase=0.3)
    setups = [(DiscreteBath([1.0], [0.4]), FockConfig(40, 1)), _two_mode_bath()]
    worst = 0.0
    for bath, fc in setups:
        for beta in (math.inf, 1.0):
            for alpha in (0.0, 0.6):
                ora = FockOracle(bath, fc, beta, alpha, state, correlated=False)
                c = np.array([ora.offdiag(x) for x in ts])
                ref = abs(state.coherence0) * np.exp(-gamma1_discrete(bath, beta, alpha, ts))
                worst = max(worst, float(np.max(np.abs(np.abs(c) - ref))))
    report(6, worst < 1e-8, f"Fock-exact |rho01| vs |ab*| exp(-gamma1) (1 and 2 modes): "
                            f"max dev {worst:.2e} (<1e-8)")


def test_7_fock_correlated():
    ts = np.linspace(0.0, 20.0, 81)
    bath = DiscreteBath([1.0], [0.4])
    worst_mag = worst_ph = 0.0
    for beta in (1.0, 2.0):
        for sz in (0.0, 0.5):
            state = QubitPureState.from_sz(sz, phase=0.7)
            for alpha in (0.0, 0.6):
                h = Hermiticity(alpha)
                split = QubitSplitting.consistent(h)
                ora = FockOracle(bath, FockConfig(40), beta, h, state, correlated=True)
                fk = np.array([ora.offdiag(x) for x in ts]) / state.coherence0
                theta = h.prefactor * phi_discrete(bath, ts)
                fa = np.array([coherence_bracket(th, split, ThermalBath(beta), state)
                               for th in theta]) * np.exp(-gamma1_discrete(bath, beta, h, ts))
                worst_mag = max(worst_mag, float(np.max(np.abs(np.abs(fk) - np.abs(fa)))))
                dphi = np.angle(fk * np.conj(fa))  # branch-aligned phase difference
                worst_ph = max(worst_ph, float(np.max(np.abs(dphi))))
    ok = worst_mag < 1e-6 and worst_ph < 1e-6
    report(7, ok, f"Fock-exact correlated coherence: |F| max dev {worst_mag:.2e}, "
                  f"arg F max dev {worst_ph:.2e} (<1e-6)")


def _first_minimum(alpha, step=0.01, t_end=200.0, chunk=2000):
    """First local minimum of exp(-gamma_c) for the sub-ohmic figure, scanning in chunks."""
    cfg = preset("fig1", "a")
    h = Hermiticity(alpha)
    split, state, bath = cfg.splitting(h), cfg.state(), cfg.thermal_bath()
    sd = cfg.spectral_density()
    from ptdephase.decoherence import gamma_c

    ys, start = [], 0
    n_total = int(round(t_end / step))
    while start <= n_total:
        idx = np.arange(start, min(start + chunk, n_total + 1))
        ys.extend(math.exp(-gamma_c(phi(sd, i * step), h, split, bath, state.sz)) for i in idx)
        mins = _local_minima(np.array(ys))
        if len(mins):
            return mins[0] * step
        start += chunk
    return math.inf


def test_8_figure_properties():
    # (a) sub-ohmic oscillations and their freeze-out
    tr = _figure_trace(0.2, 0.0)
    n_ext = _extrema(np.exp(-tr.gamma_c[1:]))
    firsts = [_first_minimum(a) for a in (0.0, 0.5, 0.8, 0.95, 0.99)]
    ok_a = n_ext >= 2 and all(x < y for x, y in zip(firsts, firsts[1:]))
    # (b) ohmic ordering in alpha
    curves = [np.exp(-_figure_trace(1.0, a).gamma) for a in ALPHAS]
    ok_b = all(np.all(hi[1:] >= lo[1:]) for lo, hi in zip(curves, curves[1:]))
    # (c) super-ohmic washout and single dip
    cfg = preset("fig1", "c")
    gc100 = _figure_trace(2.0, 0.0, np.array([0.0, 100.0])).gamma_c[1]
    n_min = len(_local_minima(np.exp(-_figure_trace(2.0, 0.0).gamma_c[1:])))
    ok_c = abs(gc100) < 1e-3 and n_min == 1
    assert cfg.s == 2.0
    report(8, ok_a and ok_b and ok_c,
           f"(a) {n_ext} extrema on (0,20], first minima at Omega t = "
           f"{', '.join(f'{x:g}' for x in firsts)} for alpha = 0, .5, .8, .95, .99; "
           f"(b) exp(-gamma) ordered in alpha: {ok_b}; "
           f"(c) gamma_c(100) = {gc100:.1e}, {n_min} interior minimum")


def test_9_density_matrix_validity():
    worst_h = worst_tr = worst_psd = worst_diag = 0.0
    for s in (0.2, 1.0, 2.0):
        cfg = preset("fig1", {0.2: "a", 1.0: "b", 2.0: "c"}[s])
        for sz, phase in ((0.0, 0.0), (0.6, 1.1), (-0.9, 2.0)):
            state = QubitPureState.from_sz(sz, phase)
            for alpha in ALPHAS:
                h = Hermiticity(alpha)
                for correlated in (True, False):
                    tr = trace(cfg.spectral_density(), cfg.thermal_bath(), h,
                               cfg.splitting(h), state, FIG_GRID, correlated=correlated,
                               q=cfg.quadrature())
                    rhos = np.array([tr.rho(i) for i in range(len(FIG_GRID))])
                    worst_h = max(worst_h, float(np.max(np.abs(
                        rhos - np.conj(np.transpose(rhos, (0, 2, 1)))))))
                    worst_tr = max(worst_tr, float(np.max(np.abs(
                        np.trace(rhos, axis1=1, axis2=2) - 1.0))))
                    worst_psd = max(worst_psd, float(-np.min(np.linalg.eigvalsh(rhos))))
                    diag = np.diagonal(rhos, axis1=1, axis2=2)
                    worst_diag = max(worst_diag, float(np.max(np.abs(diag - diag[0]))))
    ok = max(worst_h, worst_tr, worst_psd) < 1e-10 and worst_diag < 1e-12
    report(9, ok, f"rho Hermitian dev {worst_h:.1e}, trace dev {worst_tr:.1e}, "
                  f"min eigenvalue {-worst_psd:.1e} (tol 1e-10); diagonal drift "
                  f"{worst_diag:.1e} (<1e-12)")


def test_10_determinism(tmp_path):
    mismatched = []
    for fig in ("fig1", "fig2"):
        for panel in ("a", "b", "c"):
            a, b = tmp_path / f"{fig}{panel}-1", tmp_path / f"{fig}{panel}-2"
            assert main([fig, panel, "--out-dir", str(a)]) == 0
            _bath_samples.cache_clear()
            assert main([fig, panel, "--threads", "3", "--out-dir", str(b)]) == 0
            for p in sorted(a.glob("*.csv")):
                if p.read_bytes() != (b / p.name).read_bytes():
                    mismatched.append(p.name)
    # and once from a fresh interpreter
    c = tmp_path / "fresh"
    subprocess.run([sys.executable, "-m", "ptdephase", "fig1", "a", "--out-dir", str(c)],
                   check=True, capture_output=True)
    for p in sorted(c.glob("*.csv")):
        if p.read_bytes() != (tmp_path / "fig1a-1" / p.name).read_bytes():
            mismatched.append("fresh:" + p.name)
    report(10, not mismatched, f"6 presets re-run (threads 1 vs 3, fresh process): "
                               f"byte-identical CSV; mismatches {mismatched}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
