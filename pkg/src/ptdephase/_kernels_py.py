"""Pure-numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` function for function. The bath integrals are
written in the dimensionless frequency ``u = omega / Omega``:

    kind 0:  int_0^U u^(s-2) e^(-u) coth(b u / 2) (1 - cos(tau u)) du
    kind 1:  int_0^U u^(s-2) e^(-u) sin(tau u) du

with ``b = beta * Omega`` (``inf`` means zero temperature) and
``tau = Omega * t``. Panels are refined by a global, vectorised G7/K15
bisection; all panels stay in ascending order so summation is
deterministic.
"""
import math

import numpy as np

KIND_GAMMA1 = 0
KIND_PHI = 1

# Gauss-Kronrod 7/15 abscissae on [-1, 1] (positive half, Kronrod order).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss points sit at the odd Kronrod positions (indices 1, 3, 5, 7 of _XGK).
WG = np.zeros(15)
WG[[1, 3, 5]] = _WG[:3]
WG[7] = _WG[3]
WG[[13, 11, 9]] = _WG[:3]


def upper_limit(s, abs_tol):
    """Truncation point in units of the cutoff frequency."""
    return max(40.0 + math.log(1.0 / abs_tol), 4.0 * s)


def tail_bound(kind, s, b, upper):
    """Bound on the neglected integral beyond ``upper``."""
    base = upper ** (s - 2.0) * math.exp(-upper)
    if s > 2.0:
        base /= 1.0 - (s - 2.0) / upper
    if kind == KIND_PHI:
        return base
    c = 1.0 if math.isinf(b) else 1.0 / math.tanh(0.5 * b * upper)
    return 2.0 * c * base


def first_panel_mapped(s):
    return s != math.floor(s)


def initial_panels(s, tau, upper, max_panels):
    """Initial partition of ``[0, upper]``.

    Returns ``(lo, hi, mapped, u1)``; the first panel is stored in the
    stretched variable ``w`` (``u = u1 * w**(1/s)``) when ``mapped`` holds.
    """
    if tau > 2.0:
        n = int(math.ceil(upper * tau / math.pi))
        k = max(1, int(math.ceil(2.0 * n / max_panels)))
        width = k * math.pi / tau
        edges = np.arange(0, int(math.ceil(upper / width)) + 1) * width
        edges[-1] = upper
        if len(edges) > 2 and edges[-1] - edges[-2] <= 0.0:
            edges = edges[:-1]
    else:
        e = [0.0, 1.0]
        while e[-1] < upper:
            e.append(min(2.0 * e[-1], upper))
        edges = np.array(e)
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    mapped = np.zeros(lo.shape, dtype=bool)
    u1 = hi[0]
    if first_panel_mapped(s):
        lo[0], hi[0], mapped[0] = 0.0, 1.0, True
    return lo, hi, mapped, u1


def _integrand(kind, s, b, tau, u1, x, mapped):
    """Integrand at nodes ``x`` (2-D); mapped rows are in the ``w`` variable."""
    p = 1.0 / s
    u = np.where(mapped, u1 * np.power(np.where(mapped, x, 1.0), p), x)
    if kind == KIND_GAMMA1:
        h = np.sin(0.5 * tau * u)
        osc = 2.0 * h * h
        if not math.isinf(b):
            y = 0.5 * b * u
            small = y < 1e-4
            ys = np.where(small, 1.0, y)
            yt = np.where(small, y, 1.0)
            coth = np.where(small, 1.0 / yt + yt / 3.0 - yt ** 3 / 45.0, 1.0 / np.tanh(ys))
            osc = osc * coth
    else:
        osc = np.sin(tau * u)
    damp = np.exp(-u)
    direct = np.power(u, s - 2.0) * damp * osc
    stretched = (p * u1 ** s) * damp * osc / u
    return np.where(mapped, stretched, direct)


def _eval_panels(kind, s, b, tau, u1, lo, hi, mapped):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * NODES[None, :]
    f = _integrand(kind, s, b, tau, u1, x, mapped[:, None])
    k = (f @ WK) * h
    g = (f @ WG) * h
    return k, np.abs(k - g)


def bath_integral(kind, s, b, tau, rel_tol, abs_tol, max_panels):
    """Adaptive integral of the chosen kernel.

    Returns ``(value, error, n_panels, converged)``; ``value`` excludes the
    coupling constant.
    """
    if tau == 0.0:
        return 0.0, 0.0, 0, True
    upper = upper_limit(s, abs_tol)
    tail = tail_bound(kind, s, b, upper)
    lo, hi, mapped, u1 = initial_panels(s, tau, upper, max_panels)
    val, err = _eval_panels(kind, s, b, tau, u1, lo, hi, mapped)
    while True:
        total = float(np.sum(val))
        errsum = float(np.sum(err)) + tail
        tol = max(abs_tol, rel_tol * abs(total))
        if errsum <= tol:
            return total, errsum, len(lo), True
        budget = max(tol - tail, 0.0)
        split = err > budget / len(lo)
        n_new = len(lo) + int(np.count_nonzero(split))
        if n_new > max_panels or not split.any():
            return total, errsum, len(lo), False
        idx = np.repeat(np.arange(len(lo)), np.where(split, 2, 1))
        first = np.ones(len(idx), dtype=bool)
        first[1:] = idx[1:] != idx[:-1]
        child = split[idx]
        mid = 0.5 * (lo + hi)[idx]
        new_lo = np.where(child & ~first, mid, lo[idx])
        new_hi = np.where(child & first, mid, hi[idx])
        new_mapped = mapped[idx]
        new_val = val[idx]
        new_err = err[idx]
        if child.any():
            kv, ke = _eval_panels(kind, s, b, tau, u1, new_lo[child], new_hi[child],
                                  new_mapped[child])
            new_val[child] = kv
            new_err[child] = ke
        lo, hi, mapped, val, err = new_lo, new_hi, new_mapped, new_val, new_err


def discrete_sums(omega, g_sq, coth, times):
    """Discrete-mode bath sums at every time in ``times``.

    Returns two arrays ``(sum_k g_k coth_k (1 - cos w_k t) / w_k^2,
    sum_k g_k sin(w_k t) / w_k^2)``.
    """
    omega = np.asarray(omega, dtype=float)
    w2 = np.asarray(g_sq, dtype=float) / (omega * omega)
    wc = w2 * np.asarray(coth, dtype=float)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    g1 = np.empty(len(times))
    ph = np.empty(len(times))
    for i, t in enumerate(times):
        arg = omega * t
        h = np.sin(0.5 * arg)
        g1[i] = np.sum(wc * (2.0 * h * h))
        ph[i] = np.sum(w2 * np.sin(arg))
    return g1, ph
