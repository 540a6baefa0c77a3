"""Bath integrals over power-law spectral densities with exponential cutoff.

Both integrals are semi-infinite, oscillatory, and (for sub-ohmic baths or
finite temperature) carry an integrable algebraic singularity at zero
frequency. The panel-adaptive Gauss-Kronrod engine lives in the kernel
backend (compiled or numpy); this module owns the physical parametrisation
and error reporting.
"""
import math
from dataclasses import dataclass

from . import _backend
from .errors import DomainError, QuadratureError

__all__ = ["SpectralDensity", "QuadratureSpec", "integrate_gamma1_kernel",
           "integrate_phi_kernel", "check_beta", "upper_limit_for"]


@dataclass(frozen=True)
class SpectralDensity:
    """``J(w) = lambda_s (w / Omega)^s Omega exp(-w / Omega)``.

    The factor 4 of ``4 |g_k|^2`` is absorbed into ``J``.
    """

    s: float
    lambda_s: float = 1.0
    Omega: float = 1.0

    def __post_init__(self):
        for name in ("s", "lambda_s", "Omega"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.s > 0 and math.isfinite(self.s)):
            raise DomainError(f"s must be positive and finite, got {self.s!r}")
        if not (self.Omega > 0 and math.isfinite(self.Omega)):
            raise DomainError(f"Omega must be positive and finite, got {self.Omega!r}")
        if not (self.lambda_s >= 0 and math.isfinite(self.lambda_s)):
            raise DomainError(f"lambda_s must be >= 0, got {self.lambda_s!r}")

    @property
    def is_ohmic(self):
        return self.s == 1.0

    def __call__(self, omega):
        """Evaluate ``J`` at scalar or array ``omega >= 0``."""
        import numpy as np

        w = np.asarray(omega, dtype=float) / self.Omega
        out = self.lambda_s * self.Omega * np.power(w, self.s) * np.exp(-w)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_panels: int = 4096

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if int(self.max_panels) < 8:
            raise DomainError("max_panels must be at least 8")
        object.__setattr__(self, "max_panels", int(self.max_panels))


DEFAULT_SPEC = QuadratureSpec()


def check_beta(beta):
    beta = float(beta)
    if not beta > 0:
        raise DomainError(f"beta must be positive (or inf), got {beta!r}")
    return beta


def _run(kind, sd, beta_omega, t, q, label):
    t = float(t)
    if not t >= 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if sd.lambda_s == 0.0 or t == 0.0:
        return 0.0
    tau = sd.Omega * t
    val, err, npanels, ok = _backend.kernels.bath_integral(
        kind, sd.s, beta_omega, tau, q.rel_tol, q.abs_tol / sd.lambda_s, q.max_panels)
    if not ok:
        raise QuadratureError(
            f"{label} did not converge within {q.max_panels} panels at t={t}",
            sd.lambda_s * val, sd.lambda_s * err)
    return sd.lambda_s * val


def integrate_gamma1_kernel(sd, beta, t, q=DEFAULT_SPEC):
    """``int_0^inf J(w) coth(beta w / 2) (1 - cos w t) / w^2 dw``.

    ``beta = inf`` replaces coth by 1. The result is nonnegative and exactly
    zero at ``t = 0``.

    Raises
    ------
    QuadratureError
        If the panel budget ``q.max_panels`` is exhausted.
    """
    beta = check_beta(beta)
    b = math.inf if math.isinf(beta) else beta * sd.Omega
    val = _run(_backend.kernels.KIND_GAMMA1, sd, b, t, q, "gamma1 integral")
    return max(val, 0.0)


def integrate_phi_kernel(sd, t, q=DEFAULT_SPEC):
    """``Phi(t) = int_0^inf J(w) sin(w t) / w^2 dw``."""
    return _run(_backend.kernels.KIND_PHI, sd, math.inf, t, q, "Phi integral")


def upper_limit_for(s, abs_tol=DEFAULT_SPEC.abs_tol):
    """Truncation frequency of the bath integrals in units of ``Omega``."""
    return _backend.kernels.upper_limit(float(s), float(abs_tol))
