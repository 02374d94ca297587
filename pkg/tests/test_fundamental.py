"""Fundamental-solution kernel: PDE residual, adjoint, degeneracies."""

import numpy as np
import pytest

from thermobem import PhysicalParams, compute_wave_numbers, eval_kernel_jet
from thermobem.verification import (_fd_operator_residual, _moderate_params,
                                    _random_s)

UNIT = PhysicalParams(rho=1.0, lam=1.0, mu=1.0, kappa=1.0, gamma=1.0,
                      eta=1.0)


@pytest.mark.parametrize("dim", [2, 3])
def test_columns_satisfy_system(dim):
    rng = np.random.default_rng(10 + dim)
    for _ in range(3):
        p = _moderate_params(rng)
        s = _random_s(rng, sigma_hi=5.0)
        x = rng.normal(size=dim)
        d = rng.normal(size=dim)
        d *= float(rng.uniform(0.5, 1.5)) / np.linalg.norm(d)
        wn = compute_wave_numbers(p, s)
        lmax = max(abs(wn.lambda1), abs(wn.lambda2), abs(wn.lambda3))
        h0 = 0.04 / max(1.0, lmax)
        r2, sc = _fd_operator_residual(dim, x, x + d, p, s, h0 / 2)
        r4, _ = _fd_operator_residual(dim, x, x + d, p, s, h0 / 4)
        assert np.abs(16.0 * r4 - r2).max() / 15.0 / sc < 1e-8


@pytest.mark.parametrize("dim", [2, 3])
def test_adjoint_is_transpose(dim):
    rng = np.random.default_rng(20 + dim)
    for _ in range(20):
        p = _moderate_params(rng)
        s = _random_s(rng)
        x = rng.normal(size=dim)
        d = rng.normal(size=dim)
        d *= float(rng.uniform(0.2, 2.0)) / np.linalg.norm(d)
        E = eval_kernel_jet(dim, x, x + d, p, s, with_grad=False).E
        Ea = eval_kernel_jet(dim, x, x + d, p, s, with_grad=False,
                             adjoint=True).E
        assert np.abs(Ea - E.T).max() / np.abs(E).max() < 1e-10


@pytest.mark.parametrize("dim", [2, 3])
def test_gradient_consistent_with_fd(dim):
    rng = np.random.default_rng(30 + dim)
    p = UNIT
    s = 2.0 + 3.0j
    x = rng.normal(size=dim)
    y = x + np.array([0.9, -0.4, 0.3][:dim])
    h = 1e-5
    jet = eval_kernel_jet(dim, x, y, p, s, with_grad=True)
    for axis in range(dim):
        e = np.zeros(dim)
        e[axis] = h
        Ep = eval_kernel_jet(dim, x + e, y, p, s, with_grad=False).E
        Em = eval_kernel_jet(dim, x - e, y, p, s, with_grad=False).E
        fd = (Ep - Em) / (2 * h)
        assert np.abs(fd - jet.dE[..., axis]).max() / np.abs(
            jet.dE).max() < 1e-7


def test_kernel_decays_along_ray():
    # Re(lambda) > 0 forces exponential decay of every entry
    p = UNIT
    s = 2.0 + 3.0j
    y = np.zeros(2)
    norms = []
    for r in (2.0, 4.0, 8.0):
        E = eval_kernel_jet(2, np.array([r, 0.0]), y, p, s,
                            with_grad=False).E
        norms.append(np.abs(E).max())
    assert norms[0] > norms[1] > norms[2]
    assert norms[2] / norms[0] < 1e-3


def test_batched_matches_single_point():
    p = UNIT
    s = 1.5 + 2.5j
    y = np.array([0.1, -0.2])
    pts = np.array([[1.0, 0.3], [-0.7, 1.1], [0.4, -1.6]])
    batch = eval_kernel_jet(2, pts, y, p, s, with_grad=False).E
    for i, x in enumerate(pts):
        single = eval_kernel_jet(2, x, y, p, s, with_grad=False).E
        # batched and single-point paths may round differently, but must
        # agree to machine precision
        err = np.abs(batch[i] - single).max() / np.abs(single).max()
        assert err < 1e-13
