"""PT-symmetric qubit Hamiltonian, its spectrum and the similarity map to the
Hermitian (spin-boson) frame.

Basis convention used throughout the package: index 0 is ``|0>`` and index 1
is ``|1>``, with ``sigma_z = diag(+1, -1)`` in the spin-boson frame, so that
``<sigma_z> = |a|^2 - |b|^2`` for ``a|0> + b|1>``.
"""
import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularTransformError

__all__ = [
    "SIGMA_X", "SIGMA_Y", "SIGMA_Z", "IDENTITY", "HADAMARD", "DELTA",
    "Hermiticity", "SimilarityTransform", "eigenvalues", "build_transform",
    "pt_hamiltonian", "pt_frame", "check_density_matrix",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
# Maps sigma_x onto sigma_z under conjugation; its own inverse.
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
DELTA = np.array([[1j, 1], [-1j, 1]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class Hermiticity:
    """Hermiticity parameter ``alpha`` of ``H_S = i alpha sigma_z + sigma_x``.

    Any real ``alpha`` is representable; ``|alpha| <= 1`` is the real-spectrum
    regime and ``|alpha| = 1`` is the exceptional point.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def physical(self):
        return abs(self.alpha) <= 1.0

    @property
    def prefactor(self):
        """``1 - alpha^2``, the factor multiplying every bath coupling squared."""
        return 1.0 - self.alpha * self.alpha

    @property
    def energy(self):
        """``E = sqrt(1 - alpha^2)``; only defined in the physical regime."""
        if not self.physical:
            raise DomainError(f"|alpha| > 1 has no real energy (alpha={self.alpha})")
        return math.sqrt(max(self.prefactor, 0.0))

    def require_physical(self):
        if not self.physical:
            raise DomainError(
                f"decoherence requires |alpha| <= 1, got alpha={self.alpha}")
        return self


def eigenvalues(h):
    """Return ``(E+, E-) = (+sqrt(1 - alpha^2), -sqrt(1 - alpha^2))``.

    Both are complex numbers; the pair is purely imaginary for ``|alpha| > 1``.
    """
    root = cmath.sqrt(complex(1.0 - h.alpha * h.alpha, 0.0))
    if root.imag == 0.0:
        root = complex(root.real, 0.0)
    return root, -root


def pt_hamiltonian(h):
    """The 2x2 non-Hermitian system Hamiltonian ``i alpha sigma_z + sigma_x``."""
    return 1j * h.alpha * SIGMA_Z + SIGMA_X


@dataclass(frozen=True)
class SimilarityTransform:
    """``T = Delta^dag diag(s+, s-) Delta`` with ``s+- = sqrt(2 (1 +- alpha))``."""

    alpha: float
    matrix: np.ndarray = field(repr=False, compare=False)
    inverse: np.ndarray = field(repr=False, compare=False)

    def conjugate(self, op):
        """Return ``T op T^-1``."""
        return self.matrix @ op @ self.inverse


def build_transform(h):
    """Build ``T`` and ``T^-1`` for ``|alpha| < 1``.

    Raises
    ------
    SingularTransformError
        For ``|alpha| >= 1`` where ``s-`` (or ``s+``) vanishes.
    """
    a = h.alpha
    if abs(a) >= 1.0:
        raise SingularTransformError(
            f"singular transform: T is not invertible for |alpha| >= 1 (alpha={a})")
    s_plus = math.sqrt(2.0 * (1.0 + a))
    s_minus = math.sqrt(2.0 * (1.0 - a))
    dag = DELTA.conj().T
    mat = dag @ np.diag([s_plus, s_minus]).astype(complex) @ DELTA
    inv = dag @ np.diag([1.0 / s_plus, 1.0 / s_minus]).astype(complex) @ DELTA
    mat.setflags(write=False)
    inv.setflags(write=False)
    return SimilarityTransform(alpha=a, matrix=mat, inverse=inv)


def pt_frame(rho, transform, relabel=False):
    """Map a spin-boson-frame reduced density matrix back to the PT frame.

    Returns ``T^-1 rho T``. With ``relabel=True`` the fixed Hadamard unitary
    undoing the ``sigma_x -> sigma_z`` relabelling is applied first
    (``rho -> H rho H``). The result keeps unit trace but is in general not
    Hermitian.
    """
    rho = np.asarray(rho, dtype=complex)
    if relabel:
        rho = HADAMARD @ rho @ HADAMARD
    return transform.inverse @ rho @ transform.matrix


def check_density_matrix(rho, tol=1e-12):
    """Raise ``DomainError`` unless ``rho`` is Hermitian, unit-trace and PSD
    within ``tol``; returns ``rho`` otherwise."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError(f"density matrix trace {np.trace(rho)!r} != 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -tol:
        raise DomainError("density matrix has a negative eigenvalue")
    return rho
