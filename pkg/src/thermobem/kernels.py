"""Complex-argument Macdonald functions and scalar radial kernels.

The radial kernel of mode lambda is

    g(r) = K0(lambda r) / (2 pi)        in 2D,
    g(r) = exp(-lambda r) / (4 pi r)    in 3D,

the decaying fundamental solution of (Lap - lambda^2) g = -delta.  Both
satisfy the radial ODE g'' + ((d-1)/r) g' = lambda^2 g away from r = 0,
which this module uses to generate second and third derivatives from
(g, g') without extra cancellation-prone formulas.

For 2D Nystrom assembly the quadrature needs the coefficient of ln(r) in
each kernel; from K0(z) = -I0(z) ln(z/2) + analytic the chain

    gL   = -I0(lambda r) / (2 pi)
    g1L  = -lambda I1(lambda r) / (2 pi)
    g2L  = lambda^2 gL - g1L / r
    g3L  = lambda^2 g1L - (g2L / r - g1L / r^2)

propagates the log coefficient through the same recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ParameterDomainError, SingularityError

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi


def _check_arg(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise SingularityError("Macdonald function argument must be nonzero")
    if z.real < 0:
        raise ParameterDomainError(
            f"Macdonald functions restricted to Re(z) >= 0, got {z}"
        )
    return z


def bessel_k0(z: complex) -> complex:
    """Macdonald function K0(z) for Re(z) >= 0, z != 0."""
    z = _check_arg(z)
    return complex(special.kve(0, z) * np.exp(-z))


def bessel_k1(z: complex) -> complex:
    """Macdonald function K1(z) = -dK0/dz for Re(z) >= 0, z != 0."""
    z = _check_arg(z)
    return complex(special.kve(1, z) * np.exp(-z))


def bessel_k0_scaled(z: complex) -> complex:
    """Scaled variant exp(z) K0(z); safe for large |z|."""
    return complex(special.kve(0, _check_arg(z)))


def bessel_k1_scaled(z: complex) -> complex:
    """Scaled variant exp(z) K1(z); safe for large |z|."""
    return complex(special.kve(1, _check_arg(z)))


@dataclass(frozen=True)
class RadialKernelDerivs:
    """Radial kernel value g and derivatives g1 = dg/dr, g2 = d2g/dr2."""

    g: complex
    g1: complex
    g2: complex
    r: float
    lam: complex


def radial_parts(dim: int, lam: complex, r, n_derivs: int = 3):
    """Radial kernel derivative tuple (g, g', g'', [g''']) on an array of radii.

    Vectorized over ``r``; all radii must be positive.
    """
    if dim not in (2, 3):
        raise ParameterDomainError(f"dim must be 2 or 3, got {dim}")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise SingularityError("radial kernel requires r > 0")
    lam = complex(lam)
    z = lam * r
    if dim == 2:
        ez = np.exp(-z)
        g = special.kve(0, z) * ez / _TWO_PI
        g1 = -lam * special.kve(1, z) * ez / _TWO_PI
    else:
        g = np.exp(-z) / (_FOUR_PI * r)
        g1 = -g * (lam + 1.0 / r)
    out = [g, g1]
    if n_derivs >= 2:
        g2 = lam * lam * g - (dim - 1) * g1 / r
        out.append(g2)
    if n_derivs >= 3:
        g3 = lam * lam * g1 - (dim - 1) * (out[2] / r - g1 / r / r)
        out.append(g3)
    return tuple(out)


def radial_log_parts(lam: complex, r, n_derivs: int = 3):
    """Coefficients of ln(r) in the 2D radial derivative tuple.

    Entry k is the coefficient of ln(r) in d^k g / dr^k; the non-log
    remainders are recovered by subtraction where needed.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise SingularityError("log coefficients require r > 0")
    lam = complex(lam)
    z = lam * r
    # I_nu(z) = ive(nu, z) exp(|Re z|); Re z >= 0 on the decaying branch.
    # Callers must gate this on moderate Re(lambda) r or the exponential
    # growth of I_nu destroys the split numerically.
    scale = np.exp(np.real(z))
    gL = -special.ive(0, z) * scale / _TWO_PI
    g1L = -lam * special.ive(1, z) * scale / _TWO_PI
    out = [gL, g1L]
    if n_derivs >= 2:
        g2L = lam * lam * gL - g1L / r
        out.append(g2L)
    if n_derivs >= 3:
        g3L = lam * lam * g1L - (out[2] / r - g1L / r / r)
        out.append(g3L)
    return tuple(out)


def radial_kernel(dim: int, lam: complex, r: float) -> RadialKernelDerivs:
    """Radial kernel with first two derivatives at a single radius r > 0."""
    g, g1, g2 = radial_parts(dim, lam, float(r), n_derivs=2)
    return RadialKernelDerivs(g=complex(g), g1=complex(g1), g2=complex(g2),
                              r=float(r), lam=complex(lam))
