"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the adaptive bath integrals on a figure-sized grid and the discrete
mode sums used by the oracle; checks that both backends agree.
"""
import argparse
import math
import time

import numpy as np

from ptdephase import _backend
from ptdephase import _kernels_py


def _integrals(k, s, b, taus):
    out = np.empty((2, len(taus)))
    for i, tau in enumerate(taus):
        out[0, i] = k.bath_integral(k.KIND_GAMMA1, s, b, tau, 1e-9, 1e-12, 4096)[0]
        out[1, i] = k.bath_integral(k.KIND_PHI, s, math.inf, tau, 1e-9, 1e-12, 4096)[0]
    return out


def _sums(k, K, times):
    w = (np.arange(1, K + 1) - 0.5) * 67.6 / K
    g = w * np.exp(-w) * 67.6 / K
    c = 1.0 / np.tanh(0.5 * w)
    return np.array(k.discrete_sums(w, g, c, times))


def best_of(fn, repeat):
    best, out = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--samples", type=int, default=401, help="time samples on [0, 20]")
    args = ap.parse_args(argv)

    try:
        compiled = _backend.use("compiled")
    except ImportError:
        print("compiled kernels not built; nothing to compare")
        return 1
    taus = np.linspace(0.0, 20.0, args.samples)[1:]
    cases = [(f"integrals s={s:g} beta={b:g}", lambda k, s=s, b=b: _integrals(k, s, b, taus))
             for s, b in ((0.2, 1.0), (1.0, 1.0), (2.0, math.inf))]
    cases.append(("mode sums K=1e5, 201 times",
                  lambda k: _sums(k, 100_000, np.linspace(0.0, 20.0, 201))))

    print(f"{'case':<32}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>9}{'max diff':>11}")
    for label, fn in cases:
        tp, vp = best_of(lambda: fn(_kernels_py), args.repeat)
        tc, vc = best_of(lambda: fn(compiled), args.repeat)
        diff = float(np.max(np.abs(vp - vc)))
        print(f"{label:<32}{tp:>12.3f}{tc:>14.3f}{tp / tc:>8.2f}x{diff:>11.1e}")
    _backend.use("compiled")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
