"""Exact dephasing of the mapped qubit for uncorrelated and
measurement-correlated initial states.

All quantities are in the interaction picture of the spin-boson frame, with
``sigma_z = diag(+1, -1)`` on ``(|0>, |1>)``. The bath integrals depend on
``alpha`` only through the prefactor ``1 - alpha^2``.
"""
import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, PTDephaseError
from .model import Hermiticity, check_density_matrix
from .quadrature import (DEFAULT_SPEC, SpectralDensity, check_beta,
                         integrate_gamma1_kernel, integrate_phi_kernel)
from .specfun import ln_abs_gamma_sq, ln_gamma_real

__all__ = [
    "QubitPureState", "QubitSplitting", "ThermalBath", "DecoherenceTrace",
    "TracePointError", "gamma1", "gamma1_ohmic_closed", "phi", "gamma_c", "chi",
    "chi_ratio", "coherence_factor", "coherence_bracket", "reduced_rho_uncorrelated",
    "reduced_rho_correlated", "trace",
]


@dataclass(frozen=True)
class QubitPureState:
    """``a|0> + b|1>`` with ``|a|^2 + |b|^2 = 1``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state is not normalised: |a|^2 + |b|^2 = {norm!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_sz(cls, sz, phase=0.0):
        """Real-amplitude state with ``<sigma_z> = sz`` and relative phase."""
        if not -1.0 <= sz <= 1.0:
            raise DomainError(f"<sigma_z> must lie in [-1, 1], got {sz!r}")
        a = math.sqrt(0.5 * (1.0 + sz))
        b = math.sqrt(0.5 * (1.0 - sz)) * cmath.exp(1j * phase)
        # renormalise away the last ulp
        n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        return cls(a / n, b / n)

    @property
    def sz(self):
        return abs(self.a) ** 2 - abs(self.b) ** 2

    @property
    def coherence0(self):
        """Initial off-diagonal element ``a b*``."""
        return self.a * self.b.conjugate()

    def projector(self):
        v = np.array([self.a, self.b], dtype=complex)
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class QubitSplitting:
    """Qubit level splitting ``omega0``; ``mu = omega0 / 2``."""

    omega0: float

    def __post_init__(self):
        object.__setattr__(self, "omega0", float(self.omega0))
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise DomainError(f"omega0 must be positive, got {self.omega0!r}")

    @property
    def mu(self):
        return 0.5 * self.omega0

    @classmethod
    def consistent(cls, h):
        """``omega0 = 2 sqrt(1 - alpha^2)``, the splitting of the mapped
        Hamiltonian itself (undefined at the exceptional point)."""
        e = h.require_physical().energy
        if e == 0.0:
            raise DomainError("consistent splitting vanishes at |alpha| = 1")
        return cls(2.0 * e)


@dataclass(frozen=True)
class ThermalBath:
    """Inverse temperature; ``math.inf`` is zero temperature."""

    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", check_beta(self.beta))

    @property
    def zero_temperature(self):
        return math.isinf(self.beta)


def _as_bath(bath):
    return bath if isinstance(bath, ThermalBath) else ThermalBath(bath)


def _as_h(h):
    return h if isinstance(h, Hermiticity) else Hermiticity(h)


# --- uncorrelated part -------------------------------------------------------

def gamma1(sd, bath, h, t, q=DEFAULT_SPEC):
    """Decoherence function of the uncorrelated initial state.

    ``(1 - alpha^2) * int J coth (1 - cos w t) / w^2``; exactly zero at
    ``|alpha| = 1`` without touching the integral.
    """
    h = _as_h(h).require_physical()
    pref = h.prefactor
    if pref == 0.0:
        return 0.0
    return pref * integrate_gamma1_kernel(sd, _as_bath(bath).beta, t, q)


def gamma1_ohmic_closed(lambda1, Omega, bath, h, t):
    """Closed form of ``gamma1`` for the ohmic (``s = 1``) bath.

    Uses ``ln Gamma(1 + 1/(Omega beta))`` and ``ln|Gamma(1 + 1/(Omega beta) +
    i t / beta)|^2``; at zero temperature only the logarithmic term survives.
    """
    h = _as_h(h).require_physical()
    beta = _as_bath(bath).beta
    t = float(t)
    if t == 0.0 or h.prefactor == 0.0:
        return 0.0
    val = 0.5 * lambda1 * math.log1p((Omega * t) ** 2)
    if not math.isinf(beta):
        x = 1.0 / (Omega * beta)
        val += 2.0 * lambda1 * (ln_gamma_real(1.0 + x) - 0.5 * ln_abs_gamma_sq(x, t / beta))
    return h.prefactor * max(val, 0.0)


def phi(sd, t, q=DEFAULT_SPEC, exact_ohmic=True):
    """``Phi(t) = int J sin(w t) / w^2``.

    The ohmic bath short-circuits to ``lambda_1 arctan(Omega t)`` unless
    ``exact_ohmic`` is False.
    """
    t = float(t)
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if exact_ohmic and sd.is_ohmic:
        return sd.lambda_s * math.atan(sd.Omega * t)
    return integrate_phi_kernel(sd, t, q)


# --- correlated part ---------------------------------------------------------

def _check_sz(sz):
    sz = float(sz)
    if not -1.0 <= sz <= 1.0:
        raise DomainError(f"<sigma_z> must lie in [-1, 1], got {sz!r}")
    return sz


def _x(split, bath):
    return 0.5 * _as_bath(bath).beta * split.omega0


def chi_ratio(split, bath, sz):
    """``r = (sinh x - sz cosh x) / (cosh x - sz sinh x)`` with
    ``x = beta omega0 / 2``; evaluated in overflow-free scaled form."""
    sz = _check_sz(sz)
    x = _x(split, bath)
    if sz == 1.0:
        return -1.0
    e = math.exp(-2.0 * x)
    return ((1.0 - sz) - (1.0 + sz) * e) / ((1.0 - sz) + (1.0 + sz) * e)


def _corr_term(theta, split, bath, sz):
    """``(1 - sz^2) sin^2(theta) / (cosh x - sz sinh x)^2``."""
    if abs(sz) == 1.0:
        return 0.0
    x = _x(split, bath)
    e = math.exp(-2.0 * x)
    den = (1.0 - sz) + (1.0 + sz) * e  # = 2 e^{-x} (cosh x - sz sinh x)
    return (1.0 - sz * sz) * math.sin(theta) ** 2 * 4.0 * e / (den * den)


def gamma_c(phi_val, h, split, bath, sz):
    """Extra decoherence carried by the measurement-correlated bath state.

    ``-1/2 ln[1 - (1 - sz^2) sin^2((1 - alpha^2) Phi) / (cosh x - sz sinh x)^2]``
    with ``x = beta omega0 / 2``.
    """
    h = _as_h(h).require_physical()
    sz = _check_sz(sz)
    theta = h.prefactor * float(phi_val)
    if theta == 0.0:
        return 0.0
    term = _corr_term(theta, split, bath, sz)
    if term >= 1.0:
        raise DomainError(
            f"correlation bracket is not positive (1 - {term!r}); check inputs")
    return -0.5 * math.log1p(-term)


def chi(phi_val, h, split, bath, sz):
    """Phase of ``cos(theta) - i r sin(theta)``, ``theta = (1 - alpha^2) Phi``,
    continued continuously in ``theta`` from ``chi = 0`` at ``theta = 0``.

    Note the sign: ``tan(chi) = -r tan(theta)``; the opposite-sign definition
    differs only by ``chi -> -chi``. For ``r == 0`` the phase is reported as 0.
    """
    h = _as_h(h).require_physical()
    theta = h.prefactor * float(phi_val)
    if theta == 0.0:
        return 0.0
    r = chi_ratio(split, bath, sz)
    n = math.floor(theta / math.pi + 0.5)
    reduced = theta - n * math.pi
    sign = (r > 0) - (r < 0)
    return -(math.atan(r * math.tan(reduced)) + n * math.pi * sign)


def coherence_bracket(theta, split, bath, state):
    """The weighted-exponential ratio multiplying ``exp(-gamma1)`` in ``F``.

    ``(|a|^2 e^{-x} e^{i theta} + |b|^2 e^{x} e^{-i theta}) /
    (|a|^2 e^{-x} + |b|^2 e^{x})``, normalised in log space.
    """
    x = _x(split, bath)
    pa, pb = abs(state.a) ** 2, abs(state.b) ** 2
    if math.isinf(x):
        # zero temperature: the lower level carries all the weight
        return cmath.exp(-1j * theta) if pb > 0 else cmath.exp(1j * theta)
    la = math.log(pa) - x if pa > 0 else -math.inf
    lb = math.log(pb) + x if pb > 0 else -math.inf
    m = max(la, lb)
    wa = math.exp(la - m) if pa > 0 else 0.0
    wb = math.exp(lb - m) if pb > 0 else 0.0
    return (wa * cmath.exp(1j * theta) + wb * cmath.exp(-1j * theta)) / (wa + wb)


def coherence_factor(sd, bath, h, split, state, t, q=DEFAULT_SPEC):
    """``F(t)`` such that ``rho_01(t) = a b* F(t)`` for the correlated state."""
    h = _as_h(h).require_physical()
    if h.prefactor == 0.0:
        return complex(1.0, 0.0)
    g1 = gamma1(sd, bath, h, t, q)
    theta = h.prefactor * phi(sd, t, q)
    return coherence_bracket(theta, split, _as_bath(bath), state) * math.exp(-g1)


def _rho(state, factor):
    rho = state.projector()
    rho[0, 1] *= factor
    rho[1, 0] *= complex(factor).conjugate()
    return rho


def reduced_rho_uncorrelated(state, sd, bath, h, t, q=DEFAULT_SPEC):
    """Reduced qubit state for a product initial state with a thermal bath."""
    rho = _rho(state, math.exp(-gamma1(sd, bath, h, t, q)))
    return check_density_matrix(rho, tol=1e-12)


def reduced_rho_correlated(state, sd, bath, h, split, t, q=DEFAULT_SPEC):
    """Reduced qubit state after a projective measurement on the joint
    thermal state."""
    rho = _rho(state, coherence_factor(sd, bath, h, split, state, t, q))
    return check_density_matrix(rho, tol=1e-12)


# --- batch evaluation --------------------------------------------------------

class TracePointError(PTDephaseError):
    """A quantity failed at one grid point; wraps the original error."""

    def __init__(self, index, t, cause):
        super().__init__(f"failed at sample {index} (t={t!r}): {cause}")
        self.index = index
        self.t = t
        self.cause = cause


@dataclass(frozen=True)
class DecoherenceTrace:
    """Time series of every decoherence quantity on one grid."""

    times: np.ndarray
    gamma1: np.ndarray
    gamma_c: np.ndarray
    phi: np.ndarray
    chi: np.ndarray
    F: np.ndarray
    rho01: np.ndarray
    alpha: float = 0.0
    correlated: bool = True
    populations: tuple = field(default=(1.0, 0.0))

    def __post_init__(self):
        n = len(self.times)
        for name in ("gamma1", "gamma_c", "phi", "chi", "F", "rho01"):
            if len(getattr(self, name)) != n:
                raise DomainError(f"{name} has length {len(getattr(self, name))}, expected {n}")

    @property
    def abs_F(self):
        return np.abs(self.F)

    @property
    def gamma(self):
        return self.gamma1 + self.gamma_c

    def rho(self, i):
        """Reduced density matrix at sample ``i``."""
        p0, p1 = self.populations
        c = self.rho01[i]
        return np.array([[p0, c], [np.conj(c), p1]], dtype=complex)


@lru_cache(maxsize=64)
def _bath_samples(sd, beta, times, q):
    """alpha-independent integrals on a grid; cached so alpha sweeps share them."""
    g = np.empty(len(times))
    p = np.empty(len(times))
    for i, t in enumerate(times):
        try:
            g[i] = integrate_gamma1_kernel(sd, beta, t, q)
            p[i] = phi(sd, t, q)
        except PTDephaseError as exc:
            raise TracePointError(i, t, exc) from exc
    g.setflags(write=False)
    p.setflags(write=False)
    return g, p


def trace(sd, bath, h, split, state, times, correlated=True, q=DEFAULT_SPEC):
    """Evaluate every decoherence quantity on an ascending time grid.

    ``chi`` is the phase of ``F exp(gamma)``, unwrapped sample to sample; for
    ``correlated=False`` the correlation parts are identically zero.

    Raises
    ------
    TracePointError
        Naming the first failing time sample.
    """
    h = _as_h(h).require_physical()
    bath = _as_bath(bath)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise DomainError("times must be a non-empty 1-D grid")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be nonnegative and ascending")
    kern, ph = _bath_samples(sd, bath.beta, tuple(times.tolist()), q)
    pref = h.prefactor
    g1 = pref * kern
    n = len(times)
    if correlated and pref != 0.0:
        gc = np.empty(n)
        bracket = np.empty(n, dtype=complex)
        for i in range(n):
            try:
                gc[i] = gamma_c(ph[i], h, split, bath, state.sz)
            except PTDephaseError as exc:
                raise TracePointError(i, times[i], exc) from exc
            bracket[i] = coherence_bracket(pref * ph[i], split, bath, state)
        ch = np.unwrap(np.angle(bracket))
        # pin the branch to the continuous phase at the first sample
        ref = chi(ph[0], h, split, bath, state.sz)
        ch += 2.0 * math.pi * round((ref - ch[0]) / (2.0 * math.pi))
        F = bracket * np.exp(-g1)
    else:
        gc = np.zeros(n)
        ch = np.zeros(n)
        F = np.exp(-g1).astype(complex)
    rho01 = state.coherence0 * F
    return DecoherenceTrace(
        times=times, gamma1=g1, gamma_c=gc, phi=np.array(ph), chi=ch, F=F,
        rho01=rho01, alpha=h.alpha, correlated=bool(correlated),
        populations=(abs(state.a) ** 2, abs(state.b) ** 2))
