"""Material parameters, Laplace frequencies, and wave-number identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermobem import (LaplaceFrequency, ParameterDomainError,
                       PhysicalParams, compute_coupling,
                       compute_wave_numbers)

UNIT = dict(rho=1.0, lam=1.0, mu=1.0, kappa=1.0, gamma=1.0, eta=1.0)


def test_valid_params_accepted():
    p = PhysicalParams(**UNIT)
    assert p.epsilon == pytest.approx(1.0 / 3.0)
    assert p.c_s == pytest.approx(1.0)
    assert p.c_p == pytest.approx(np.sqrt(3.0))


@pytest.mark.parametrize("field,value", [
    ("rho", 0.0), ("rho", -1.0), ("mu", 0.0), ("kappa", -0.5),
    ("gamma", 0.0), ("eta", -2.0),
])
def test_positive_constants_enforced(field, value):
    kwargs = dict(UNIT)
    kwargs[field] = value
    with pytest.raises(ParameterDomainError):
        PhysicalParams(**kwargs)


def test_bulk_modulus_bound():
    # lam may be negative but lam + mu (2D bulk term) must stay positive
    with pytest.raises(ParameterDomainError):
        PhysicalParams(rho=1.0, lam=-1.0, mu=1.0, kappa=1.0, gamma=1.0,
                       eta=1.0)


def test_large_coupling_warns():
    with pytest.warns(UserWarning):
        PhysicalParams(rho=1.0, lam=1.0, mu=1.0, kappa=1.0, gamma=3.0,
                       eta=3.0)


def test_compute_coupling_positive():
    gamma, eta = compute_coupling(alpha=0.1, theta0=2.0, k=1.5,
                                  lam=1.0, mu=1.0)
    assert gamma > 0 and eta > 0


def test_laplace_frequency_domain():
    f = LaplaceFrequency(2.0 + 3.0j)
    assert f.sigma == pytest.approx(2.0)
    assert f.sigma_min == pytest.approx(min(1.0, 2.0))
    with pytest.raises(ParameterDomainError):
        LaplaceFrequency(-1.0 + 2.0j)
    with pytest.raises(ParameterDomainError):
        LaplaceFrequency(0.0 + 5.0j)


def _quadratic_residual(p, s):
    wn = compute_wave_numbers(p, s)
    s_k = s / p.kappa
    lp2 = p.rho * s * s / (p.lam + 2.0 * p.mu)
    b = s_k * (1.0 + p.epsilon) + lp2
    c = s_k * lp2
    scale = abs(b) ** 2 + abs(c)
    return max(abs(z * z - b * z + c) / scale
               for z in (wn.lambda1 ** 2, wn.lambda2 ** 2))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(-0.4, 10.0), st.floats(0.1, 10.0),
       st.floats(0.1, 10.0), st.floats(0.1, 3.0), st.floats(0.1, 3.0),
       st.floats(0.01, 50.0), st.floats(-50.0, 50.0))
def test_wave_numbers_satisfy_quadratic(rho, lam_rel, mu, kappa, gamma, eta,
                                        sigma, omega):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = PhysicalParams(rho=rho, lam=lam_rel * mu, mu=mu, kappa=kappa,
                           gamma=gamma, eta=eta)
    s = complex(sigma, omega)
    assert _quadratic_residual(p, s) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 50.0), st.floats(-50.0, 50.0))
def test_wave_numbers_right_half_plane(sigma, omega):
    # all wave numbers must have positive real part (decaying kernels)
    p = PhysicalParams(**UNIT)
    wn = compute_wave_numbers(p, complex(sigma, omega))
    assert wn.lambda1.real > 0
    assert wn.lambda2.real > 0
    assert wn.lambda3.real > 0


def test_thermal_mode_labeling_in_decoupled_limit():
    ge = 1e-10 * 3.0
    p = PhysicalParams(rho=1.0, lam=1.0, mu=1.0, kappa=1.0,
                       gamma=np.sqrt(ge), eta=np.sqrt(ge))
    for s in (1.0 + 0.0j, 2.0 + 3.0j, 0.3 - 7.0j):
        wn = compute_wave_numbers(p, s)
        assert abs(wn.lambda1 ** 2 - s) / abs(s) < 1e-6
        lp2 = p.rho * s * s / (p.lam + 2.0 * p.mu)
        assert abs(wn.lambda2 ** 2 - lp2) / abs(lp2) < 1e-6
