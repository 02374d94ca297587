"""Material constants, Laplace frequencies and thermoelastic wave numbers.

The Laplace-domain system couples the elastic displacement u and the
temperature variation theta through

    Lame* u - rho s^2 u - gamma grad theta = 0,
    Lap theta - (s/kappa) theta - s eta div u = 0,

with Lame* u = mu Lap u + (lambda + mu) grad div u.  Plane-wave analysis
yields three wave numbers: two coupled pressure/thermal modes lambda_1,
lambda_2 (roots of a quadratic in lambda^2) and the shear mode lambda_3.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import DegenerateRootError, ParameterDomainError

#: |l1^2 - l2^2| below this fraction of |l1^2|+|l2^2| counts as a double root.
DEGENERACY_THRESHOLD = 1e-10


@dataclass(frozen=True)
class PhysicalParams:
    """Material constants of the thermoelastic medium.

    rho    mass density (> 0)
    lam    first Lame parameter
    mu     second Lame parameter (> 0)
    kappa  thermal diffusivity (> 0)
    gamma  thermo-mechanical coupling (> 0)
    eta    mechanical-thermal coupling (> 0, same sign as gamma)
    """

    rho: float
    lam: float
    mu: float
    kappa: float
    gamma: float
    eta: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ParameterDomainError(f"rho must be positive, got {self.rho}")
        if not self.mu > 0:
            raise ParameterDomainError(f"mu must be positive, got {self.mu}")
        if not self.lam + 2.0 * self.mu / 3.0 > 0:
            raise ParameterDomainError(
                f"bulk modulus lambda + 2 mu / 3 must be positive, got "
                f"{self.lam + 2.0 * self.mu / 3.0}"
            )
        if not self.kappa > 0:
            raise ParameterDomainError(f"kappa must be positive, got {self.kappa}")
        if self.eta != 0 and not self.gamma / self.eta > 0:
            raise ParameterDomainError(
                f"gamma/eta must be positive, got {self.gamma}/{self.eta}"
            )
        if self.epsilon >= 1.0:
            warnings.warn(
                f"coupling parameter epsilon = {self.epsilon:.6g} >= 1 is unusual "
                "for physical bodies; the solver accepts it",
                stacklevel=2,
            )

    def as_dict(self) -> dict:
        """Plain-float mapping (cache keys, manifests)."""
        return {"rho": self.rho, "lam": self.lam, "mu": self.mu,
                "kappa": self.kappa, "gamma": self.gamma, "eta": self.eta}

    @property
    def epsilon(self) -> float:
        """Dimensionless coupling epsilon = gamma eta kappa / (lambda + 2 mu)."""
        return self.gamma * self.eta * self.kappa / (self.lam + 2.0 * self.mu)

    @property
    def c_s(self) -> float:
        """Shear wave speed sqrt(mu/rho)."""
        return math.sqrt(self.mu / self.rho)

    @property
    def c_p(self) -> float:
        """Pressure wave speed sqrt((lambda + 2 mu)/rho)."""
        return math.sqrt((self.lam + 2.0 * self.mu) / self.rho)


def compute_coupling(alpha: float, theta0: float, k: float,
                     lam: float, mu: float) -> tuple[float, float]:
    """Coupling constants gamma = (lambda + 2 mu / 3) alpha, eta = gamma theta0 / k.

    alpha is the volumetric thermal expansion coefficient, theta0 the
    reference temperature and k the thermal conductivity.
    """
    if not k > 0:
        raise ParameterDomainError(f"thermal conductivity k must be positive, got {k}")
    bulk = lam + 2.0 * mu / 3.0
    if not bulk > 0:
        raise ParameterDomainError(f"bulk modulus must be positive, got {bulk}")
    gamma = bulk * alpha
    eta = gamma * theta0 / k
    return gamma, eta


@dataclass(frozen=True)
class LaplaceFrequency:
    """Laplace parameter s with Re(s) > 0 and the derived decay quantities."""

    s: complex

    def __post_init__(self):
        if not self.s.real > 0:
            raise ParameterDomainError(
                f"Laplace parameter must satisfy Re(s) > 0, got {self.s}"
            )

    @property
    def sigma(self) -> float:
        return self.s.real

    @property
    def sigma_min(self) -> float:
        return min(1.0, self.s.real)


@dataclass(frozen=True)
class WaveNumbers:
    """The three wave numbers at a fixed Laplace frequency.

    lambda1 is the thermal-dominant mode (continuation of sqrt(s/kappa) as
    the coupling vanishes), lambda2 the pressure-dominant mode, lambda3 the
    shear mode; lambda_p is the uncoupled pressure wave number.  All have
    positive real part (decaying branch).
    """

    lambda1: complex
    lambda2: complex
    lambda3: complex
    lambda_p: complex
    epsilon: float


def _sqrt_right_half(z: complex) -> complex:
    """Principal square root; for Re(s) > 0 inputs it lands in Re > 0."""
    w = cmath.sqrt(z)
    if w.real < 0:
        w = -w
    return w


def compute_wave_numbers(params: PhysicalParams,
                         s: complex | LaplaceFrequency) -> WaveNumbers:
    """Solve the dispersion relations for the three wave numbers.

    lambda1^2 and lambda2^2 are the roots of

        z^2 - [(s/kappa)(1 + epsilon) + lambda_p^2] z + (s/kappa) lambda_p^2 = 0,

    solved in the cancellation-free form (larger-magnitude root from the
    quadratic formula, the other from the product identity).
    """
    if isinstance(s, LaplaceFrequency):
        s = s.s
    s = complex(s)
    if not s.real > 0:
        raise ParameterDomainError(f"Re(s) > 0 required, got s = {s}")

    eps = params.epsilon
    lam_p2 = params.rho * s * s / (params.lam + 2.0 * params.mu)
    lam3_2 = params.rho * s * s / params.mu
    s_k = s / params.kappa

    b = s_k * (1.0 + eps) + lam_p2
    c = s_k * lam_p2
    disc = cmath.sqrt(b * b - 4.0 * c)
    # pick the sign that avoids cancellation in b +/- disc
    if abs(b + disc) >= abs(b - disc):
        z_big = 0.5 * (b + disc)
    else:
        z_big = 0.5 * (b - disc)
    z_small = c / z_big

    if abs(z_big - z_small) < DEGENERACY_THRESHOLD * (abs(z_big) + abs(z_small)):
        raise DegenerateRootError(
            f"wave-number roots coincide at s = {s}: {z_big} ~ {z_small}"
        )

    # label the thermal-dominant root by proximity to s/kappa
    if abs(z_big - s_k) <= abs(z_small - s_k):
        z1, z2 = z_big, z_small
    else:
        z1, z2 = z_small, z_big

    return WaveNumbers(
        lambda1=_sqrt_right_half(z1),
        lambda2=_sqrt_right_half(z2),
        lambda3=_sqrt_right_half(lam3_2),
        lambda_p=_sqrt_right_half(lam_p2),
        epsilon=eps,
    )
