"""Special functions used by the decoherence formulas.

Scalar, double-precision implementations of coth, ln Gamma on the positive
real axis, ln|Gamma(1 + a + ib)|^2 and a cancellation-free 1 - cos x.
Zero temperature is passed around as ``math.inf``.
"""
import cmath
import math

from .errors import DomainError

__all__ = ["coth_stable", "ln_gamma_real", "ln_abs_gamma_sq", "one_minus_cos",
           "LANCZOS_G", "LANCZOS_COEFFS"]

# g = 7, n = 9 Lanczos set; ~1e-15 relative for Re z >= 1/2.
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)
_LN_PI = math.log(math.pi)


def coth_stable(x):
    """Hyperbolic cotangent for ``x > 0``; ``coth(inf) == 1``.

    Below 1e-4 the three-term Laurent series is used, which is exact to
    rounding there and avoids the ``1/tanh`` loss of precision.
    """
    if not x > 0.0:
        raise DomainError(f"coth_stable requires x > 0, got {x!r}")
    if math.isinf(x):
        return 1.0
    if x < 1e-4:
        return 1.0 / x + x / 3.0 - x ** 3 / 45.0
    if x > 20.0:
        # 1/tanh underflows nothing here, but skip the division.
        return 1.0 + 2.0 * math.exp(-2.0 * x) / (1.0 - math.exp(-2.0 * x))
    return 1.0 / math.tanh(x)


def _lanczos_log_gamma_p1(z):
    """ln Gamma(z + 1) for complex z with Re z >= -1/2 (principal log branch
    of the Lanczos product; only the real part is used by callers)."""
    acc = LANCZOS_COEFFS[0]
    for k in range(1, len(LANCZOS_COEFFS)):
        acc += LANCZOS_COEFFS[k] / (z + k)
    tmp = z + LANCZOS_G + 0.5
    return _HALF_LN_2PI + (z + 0.5) * cmath.log(tmp) - tmp + cmath.log(acc)


def ln_gamma_real(x):
    """ln Gamma(x) for real ``x > 0``.

    Small positive integers go through the exact factorial so that
    ``ln_gamma_real(1) == ln_gamma_real(2) == 0`` exactly.
    """
    if not x > 0.0:
        raise DomainError(f"ln_gamma_real requires x > 0, got {x!r}")
    if math.isinf(x):
        return math.inf
    if x == int(x) and x <= 30:
        return math.log(math.factorial(int(x) - 1))
    if x < 0.5:
        # Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return _LN_PI - math.log(math.sin(math.pi * x)) - ln_gamma_real(1.0 - x)
    return _lanczos_log_gamma_p1(complex(x - 1.0, 0.0)).real


def ln_abs_gamma_sq(a, b):
    """Return ln|Gamma(1 + a + i b)|^2 for real ``a`` and ``b``.

    Raises
    ------
    DomainError
        If ``1 + a`` is a non-positive integer and ``b == 0`` (a pole).
    """
    w_re = 1.0 + a
    if b == 0.0:
        if w_re <= 0.0 and w_re == int(w_re):
            raise DomainError(f"Gamma has a pole at 1 + a = {w_re!r}")
        if w_re > 0.0:
            return 2.0 * ln_gamma_real(w_re)
    if w_re < 0.5:
        # |Gamma(w) Gamma(1-w)|^2 = pi^2 / (sin^2(pi x) + sinh^2(pi y))
        x, y = w_re, b
        s2 = math.sin(math.pi * x) ** 2 + math.sinh(math.pi * y) ** 2
        return 2.0 * _LN_PI - math.log(s2) - ln_abs_gamma_sq(-x, -y)
    return 2.0 * _lanczos_log_gamma_p1(complex(a, b)).real


def one_minus_cos(x):
    """``1 - cos(x)`` computed as ``2 sin^2(x/2)``."""
    h = math.sin(0.5 * x)
    return 2.0 * h * h
