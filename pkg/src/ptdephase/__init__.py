"""Exact dephasing dynamics of a PT-symmetric qubit coupled to a bosonic bath.

The non-Hermitian qubit ``i alpha sigma_z + sigma_x`` is mapped by a 2x2
similarity transform onto a pure-dephasing spin-boson model whose bath
couplings are scaled by ``1 - alpha^2``. The package evaluates the exact
decoherence functions for product and measurement-correlated initial states,
and cross-checks them against finite-mode sums and Fock-truncated exact
evolution.
"""
from ._backend import BACKEND
from .decoherence import (DecoherenceTrace, QubitPureState, QubitSplitting,
                          ThermalBath, chi, chi_ratio, coherence_factor, gamma1,
                          gamma1_ohmic_closed, gamma_c, phi, reduced_rho_correlated,
                          reduced_rho_uncorrelated, trace)
from .errors import (ConfigError, CutoffError, DimensionError, DomainError,
                     PTDephaseError, QuadratureError, SingularTransformError)
from .model import Hermiticity, SimilarityTransform, build_transform, eigenvalues, pt_frame
from .oracle import (DiscreteBath, FockConfig, FockOracle, discretize,
                     fock_exact_offdiag, gamma1_discrete, phi_discrete)
from .quadrature import (QuadratureSpec, SpectralDensity, integrate_gamma1_kernel,
                         integrate_phi_kernel)

__version__ = "0.1.0"
