"""Radial kernels and Macdonald functions against classical identities."""

import numpy as np
import pytest
from scipy import integrate, special

from thermobem import (SingularityError, bessel_k0, bessel_k1,
                       radial_log_parts, radial_parts)
from thermobem.kernels import radial_kernel


def k0_by_integral(z: complex) -> complex:
    def f_re(u):
        return np.exp(-z.real * np.cosh(u)) * np.cos(z.imag * np.cosh(u))

    def f_im(u):
        return -np.exp(-z.real * np.cosh(u)) * np.sin(z.imag * np.cosh(u))
    hi = min(700.0 / max(z.real, 1e-3), 30.0)
    re, _ = integrate.quad(f_re, 0.0, hi, limit=400)
    im, _ = integrate.quad(f_im, 0.0, hi, limit=400)
    return complex(re, im)


@pytest.mark.parametrize("z", [0.3 + 0.0j, 1.0 + 1.0j, 2.0 - 3.0j,
                               5.0 + 0.5j])
def test_k0_integral_representation(z):
    ref = k0_by_integral(z)
    assert abs(bessel_k0(z) - ref) / abs(ref) < 1e-10


def test_k_wronskian():
    rng = np.random.default_rng(0)
    for _ in range(50):
        z = complex(np.exp(rng.uniform(np.log(0.05), np.log(30.0))),
                    rng.uniform(-20.0, 20.0))
        i0 = special.ive(0, z) * np.exp(abs(z.real))
        i1 = special.ive(1, z) * np.exp(abs(z.real))
        w = i0 * bessel_k1(z) + i1 * bessel_k0(z)
        assert abs(w - 1.0 / z) * abs(z) < 1e-12


def test_left_half_plane_rejected():
    with pytest.raises(Exception):
        bessel_k0(-1.0 + 0.5j)
    with pytest.raises(Exception):
        bessel_k1(0.0 + 0.0j)


@pytest.mark.parametrize("dim", [2, 3])
def test_radial_derivative_chain(dim):
    rng = np.random.default_rng(1)
    for _ in range(10):
        lam = complex(rng.uniform(0.3, 5.0), rng.uniform(-5.0, 5.0))
        r = float(rng.uniform(0.2, 3.0))
        h = 1e-4 * r
        rr = r + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        g, g1, g2, g3 = radial_parts(dim, lam, rr, n_derivs=3)
        fd1 = (g[0] - 8 * g[1] + 8 * g[3] - g[4]) / (12 * h)
        fd2 = (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * h
                                                                    * h)
        fd3 = (-g[0] + 2 * g[1] - 2 * g[3] + g[4]) / (2 * h ** 3)
        sc = abs(g[2]) + abs(g1[2]) * r
        assert abs(fd1 - g1[2]) / sc < 1e-6
        assert abs(fd2 - g2[2]) / (sc / r) < 1e-6
        assert abs(fd3 - g3[2]) / (sc / r ** 2) < 2e-4


@pytest.mark.parametrize("dim", [2, 3])
def test_radial_ode(dim):
    # g'' + (d-1)/r g' = lam^2 g for the screened free-space kernel
    rng = np.random.default_rng(2)
    for _ in range(20):
        lam = complex(rng.uniform(0.3, 5.0), rng.uniform(-5.0, 5.0))
        r = np.array([float(rng.uniform(0.1, 4.0))])
        g, g1, g2, _ = radial_parts(dim, lam, r, n_derivs=3)
        ode = g2[0] + (dim - 1) / r[0] * g1[0] - lam * lam * g[0]
        assert abs(ode) / (abs(lam * lam * g[0]) + abs(g2[0])) < 1e-11


def test_log_split_leaves_analytic_remainder():
    rng = np.random.default_rng(3)
    for _ in range(10):
        lam = complex(rng.uniform(0.3, 4.0), rng.uniform(-3.0, 3.0))
        rr = 1e-4 * np.arange(1.0, 6.0)
        g, _ = radial_parts(2, lam, rr, n_derivs=1)
        gL, _ = radial_log_parts(lam, rr, n_derivs=1)
        smooth = g - gL * np.log(rr)
        V = np.vander(rr[:3] ** 2, 3)
        coef = np.linalg.solve(V, smooth[:3])
        pred = np.polyval(coef, rr[3:] ** 2)
        assert np.max(np.abs(pred - smooth[3:])) / np.max(
            np.abs(smooth)) < 1e-9


def test_zero_radius_rejected():
    with pytest.raises(SingularityError):
        radial_kernel(2, 1.0 + 1.0j, 0.0)
