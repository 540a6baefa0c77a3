"""Independent ground truth for the analytic decoherence functions.

Two engines:

* finite mode sums replacing the continuum bath integrals;
* dense, Fock-truncated evolution of the qubit plus at most three bath
  modes, for both the product and the measurement-projected initial state.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _backend
from .errors import CutoffError, DimensionError, DomainError
from .model import Hermiticity
from .quadrature import upper_limit_for

__all__ = ["DiscreteBath", "FockConfig", "discretize", "gamma1_discrete",
           "phi_discrete", "FockOracle", "fock_exact_offdiag", "MAX_FOCK_DIM"]

MAX_FOCK_DIM = 4096
TAIL_TOL = 1e-8


@dataclass(frozen=True)
class DiscreteBath:
    """Finite bath; ``g_sq[k] = 4 |g_k|^2``."""

    omega: np.ndarray
    g_sq: np.ndarray

    def __post_init__(self):
        w = np.array(self.omega, dtype=float, ndmin=1)
        g = np.array(self.g_sq, dtype=float, ndmin=1)
        if w.shape != g.shape or w.ndim != 1:
            raise DomainError("omega and g_sq must be 1-D arrays of equal length")
        if np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise DomainError("mode frequencies must be positive and strictly ascending")
        if np.any(g < 0) or not np.isfinite(g.sum()):
            raise DomainError("coupling weights must be finite and nonnegative")
        w.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "g_sq", g)

    @classmethod
    def from_modes(cls, modes):
        """Build from ``[(omega_k, g_sq_k), ...]``."""
        modes = list(modes)
        return cls([m[0] for m in modes], [m[1] for m in modes])

    def __len__(self):
        return len(self.omega)

    @property
    def coupling(self):
        """Real, nonnegative ``g_k = sqrt(g_sq_k) / 2``."""
        return 0.5 * np.sqrt(self.g_sq)


def discretize(sd, K, omega_max=None, grid="uniform"):
    """Replace ``J`` by ``K`` modes with midpoint weights.

    ``grid="uniform"`` puts modes at ``(k - 1/2) * omega_max / K``. For
    sub-ohmic baths that rule converges only like ``K**(-s)`` because the
    weight ``J(w)/w^2`` is singular at zero; ``grid="power"`` applies the
    midpoint rule in ``v = (w / omega_max)**s`` instead, which removes the
    singularity.
    """
    K = int(K)
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    if omega_max is None:
        omega_max = sd.Omega * upper_limit_for(sd.s)
    if not omega_max > 0:
        raise DomainError(f"omega_max must be positive, got {omega_max!r}")
    mid = (np.arange(1, K + 1) - 0.5) / K
    if grid == "uniform":
        w = mid * omega_max
        weight = np.full(K, omega_max / K)
    elif grid == "power":
        p = 1.0 / sd.s
        w = omega_max * mid ** p
        weight = omega_max * p * mid ** (p - 1.0) / K
    else:
        raise DomainError(f"unknown grid {grid!r}")
    return DiscreteBath(w, sd(w) * weight)


def _coth_half(bath, beta):
    if math.isinf(beta):
        return np.ones(len(bath))
    y = 0.5 * beta * bath.omega
    with np.errstate(over="ignore"):
        return np.where(y < 1e-4, 1.0 / y + y / 3.0, 1.0 / np.tanh(np.maximum(y, 1e-300)))


def _prefactor(h):
    h = h if isinstance(h, Hermiticity) else Hermiticity(h)
    return h.require_physical().prefactor


def gamma1_discrete(bath, beta, h, t):
    """``(1 - alpha^2) sum_k g_sq_k coth(beta w_k / 2) (1 - cos w_k t) / w_k^2``.

    ``t`` may be a scalar or an array; the return matches.
    """
    pref = _prefactor(h)
    scalar = np.ndim(t) == 0
    g1, _ = _backend.kernels.discrete_sums(bath.omega, bath.g_sq, _coth_half(bath, beta),
                                           np.atleast_1d(np.asarray(t, dtype=float)))
    out = pref * g1
    return float(out[0]) if scalar else out


def phi_discrete(bath, t):
    """``sum_k g_sq_k sin(w_k t) / w_k^2``."""
    scalar = np.ndim(t) == 0
    _, ph = _backend.kernels.discrete_sums(bath.omega, bath.g_sq, np.ones(len(bath)),
                                           np.atleast_1d(np.asarray(t, dtype=float)))
    return float(ph[0]) if scalar else ph


# --- Fock-space exact evolution ----------------------------------------------

@dataclass(frozen=True)
class FockConfig:
    """Per-mode Fock cutoff (states ``0 .. n_cut``) for ``modes_used`` modes."""

    n_cut: int
    modes_used: int = 1

    def __post_init__(self):
        if int(self.n_cut) < 1:
            raise DomainError("n_cut must be >= 1")
        if not 1 <= int(self.modes_used) <= 3:
            raise DomainError("modes_used must be in [1, 3]")
        object.__setattr__(self, "n_cut", int(self.n_cut))
        object.__setattr__(self, "modes_used", int(self.modes_used))

    @property
    def dim(self):
        return 2 * (self.n_cut + 1) ** self.modes_used

    def check(self, bath, beta, energy):
        """Raise unless the cutoff holds the thermal and displaced bath states.

        Two tail weights per mode must stay below 1e-8: the bare thermal
        occupation beyond ``n_cut`` and the Poisson tail of a coherent state
        of the largest displacement the dynamics can produce.
        """
        if len(bath) != self.modes_used:
            raise DomainError(
                f"FockConfig expects {self.modes_used} modes, bath has {len(bath)}")
        if self.dim > MAX_FOCK_DIM:
            raise DimensionError(
                f"Fock dimension {self.dim} exceeds the dense limit {MAX_FOCK_DIM}")
        for w, g in zip(bath.omega, bath.coupling):
            thermal = 0.0 if math.isinf(beta) else math.exp(-beta * w * (self.n_cut + 1))
            # initial displacement E g / w, doubled by the evolution, plus margin
            shift = 4.0 * energy * g / w
            coherent = float(stats.poisson.sf(self.n_cut, shift * shift)) if shift > 0 else 0.0
            if thermal > TAIL_TOL or coherent > TAIL_TOL:
                raise CutoffError(
                    f"n_cut={self.n_cut} too small for mode w={w:g}: thermal tail "
                    f"{thermal:.2e}, displacement tail {coherent:.2e} (limit {TAIL_TOL:g})")


def _ladder(n):
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def _embed(op, k, m, n):
    out = np.ones((1, 1))
    eye = np.eye(n)
    for j in range(m):
        out = np.kron(out, op if j == k else eye)
    return out


class FockOracle:
    """Dense exact dynamics of the mapped Hamiltonian

    ``E sigma_z + sum_k w_k b_k^dag b_k + E sigma_z sum_k g_k (b_k + b_k^dag)``

    with ``E = sqrt(1 - alpha^2)`` and real ``g_k``. One Hermitian
    eigendecomposition serves the initial state and every evolution time.
    """

    def __init__(self, bath, fc, beta, h, state, correlated):
        h = h if isinstance(h, Hermiticity) else Hermiticity(h)
        if abs(h.alpha) >= 1.0:
            raise DomainError("the Fock oracle needs |alpha| < 1")
        beta = float(beta)
        if not beta > 0:
            raise DomainError("beta must be positive")
        self.energy = h.energy
        fc.check(bath, beta, self.energy)
        self.state = state
        n, m = fc.n_cut + 1, len(bath)
        nb = n ** m
        a = _ladder(n)
        hb = np.zeros((nb, nb))
        v = np.zeros((nb, nb))
        for k, (w, g) in enumerate(zip(bath.omega, bath.coupling)):
            ak = _embed(a, k, m, n)
            hb += w * ak.T @ ak
            v += g * (ak + ak.T)
        sz = np.diag([1.0, -1.0])
        E = self.energy
        H = np.kron(E * sz, np.eye(nb)) + np.kron(np.eye(2), hb) + np.kron(E * sz, v)
        self.dim_bath = nb
        self.evals, self.evecs = np.linalg.eigh(H)
        psi = np.array([state.a, state.b], dtype=complex)
        if correlated:
            rho_b = self._projected_bath(psi, beta)
        else:
            rho_b = self._thermal_bath(hb, beta)
        rho0 = np.kron(np.outer(psi, psi.conj()), rho_b)
        rho0_eig = self.evecs.conj().T @ rho0 @ self.evecs
        # partial-trace overlaps: red_ij(t) = ph^T (rho0_eig * M_ij) ph^*
        blocks = [self.evecs[:nb], self.evecs[nb:]]
        self._reduce = np.array([[rho0_eig * (blocks[i].T @ blocks[j].conj())
                                  for j in range(2)] for i in range(2)])

    def _boltzmann(self, evals, beta):
        shifted = evals - evals.min()
        if math.isinf(beta):
            return (shifted < 1e-12).astype(float)
        return np.exp(-beta * shifted)

    def _thermal_bath(self, hb, beta):
        # H_B is diagonal in the number basis
        wts = self._boltzmann(np.diag(hb), beta)
        return np.diag(wts / wts.sum()).astype(complex)

    def _projected_bath(self, psi, beta):
        """``<psi| exp(-beta H) |psi> / Z`` from the shared eigendecomposition."""
        wts = self._boltzmann(self.evals, beta)
        gibbs = (self.evecs * wts) @ self.evecs.conj().T
        nb = self.dim_bath
        g4 = gibbs.reshape(2, nb, 2, nb)
        rho_b = np.einsum("i,iajb,j->ab", psi.conj(), g4, psi)
        z = np.trace(rho_b).real
        if not z > 0:
            raise DomainError("projected thermal state has zero weight")
        return rho_b / z

    def reduced(self, t):
        """Reduced 2x2 qubit state at time ``t`` (Schrodinger picture)."""
        ph = np.exp(-1j * self.evals * t)
        red = (self._reduce @ ph.conj()) @ ph
        _check_reduced(red)
        return red

    def offdiag(self, t):
        """Interaction-picture coherence ``<0|rho_S(t)|1>``; the free factor
        ``exp(-2 i E t)`` is removed."""
        red = self.reduced(t)
        return complex(red[0, 1] * np.exp(2j * self.energy * t))


def _check_reduced(red, tol=1e-10):
    if np.max(np.abs(red - red.conj().T)) > tol:
        raise DomainError("reduced state lost Hermiticity")
    if abs(np.trace(red) - 1.0) > tol:
        raise DomainError(f"reduced state trace {np.trace(red)!r} != 1")
    if np.linalg.eigvalsh(0.5 * (red + red.conj().T)).min() < -tol:
        raise DomainError("reduced state is not positive semidefinite")


def fock_exact_offdiag(bath, fc, beta, h, state, correlated, t):
    """Coherence ``<0|rho_S|1>`` in the interaction picture at time(s) ``t``."""
    oracle = FockOracle(bath, fc, beta, h, state, correlated)
    if np.ndim(t) == 0:
        return oracle.offdiag(float(t))
    return np.array([oracle.offdiag(float(x)) for x in t])
