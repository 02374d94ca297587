"""Acceptance gate: one test per criterion, tolerances pinned.

Each test prints a single CRITERION line with its measured values before
asserting, so the pass/fail record survives in the pytest output.
"""

import math
import time

import numpy as np
import pytest

from thermobem import (CQConfig, PhysicalParams, TimeSignal, make_circle,
                       march, probe_coercivity, smooth_ramp)
from thermobem.cq import cq_forward, cq_frequencies, cq_inverse
from thermobem.operators import point_source_rhs
from thermobem.verification import (adjoint_suite, dispersion_suite,
                                    jump_check, pde_residual_suite,
                                    point_source_check)

THREADS = 4


def _report(num: int, passed: bool, detail: str) -> None:
    print(f"\nCRITERION {num}: {'PASS' if passed else 'FAIL'} ({detail})")


def test_criterion_1_dispersion_identities():
    t0 = time.perf_counter()
    suite = dispersion_suite("full", seed=0)
    wall = time.perf_counter() - t0
    quad = suite.checks[0]
    limits = suite.checks[1:]
    ok = (quad.value < 1e-12 and all(c.value < 1e-6 for c in limits)
          and wall < 1.0)
    _report(1, ok, f"residual {quad.value:.2e} < 1e-12, limits "
            f"{max(c.value for c in limits):.2e} < 1e-6, {wall:.2f} s < 1 s")
    assert quad.value < 1e-12
    assert all(c.value < 1e-6 for c in limits)
    assert wall < 1.0


def test_criterion_2_pde_residual():
    t0 = time.perf_counter()
    suite = pde_residual_suite("full", seed=0)     # 10 configs per dimension
    wall = time.perf_counter() - t0
    order = next(c for c in suite.checks if "order" in c.name)
    extrap = next(c for c in suite.checks if "extrapolated" in c.name)
    ok = order.value >= 3.5 and extrap.value < 1e-8 and wall < 30.0
    _report(2, ok, f"order {order.value:.2f} >= 3.5, extrapolated residual "
            f"{extrap.value:.2e} < 1e-8, {wall:.1f} s < 30 s")
    assert order.value >= 3.5
    assert extrap.value < 1e-8
    assert wall < 30.0


def test_criterion_3_adjoint_identity():
    t0 = time.perf_counter()
    suite = adjoint_suite("full", seed=0)          # 100 random configurations
    wall = time.perf_counter() - t0
    c = suite.checks[0]
    ok = c.value < 1e-10 and wall < 5.0
    _report(3, ok, f"max relative deviation {c.value:.2e} < 1e-10 at 100 "
            f"configurations, {wall:.1f} s < 5 s")
    assert c.value < 1e-10
    assert wall < 5.0


def test_criterion_4_jump_relations():
    t0 = time.perf_counter()
    out = jump_check(n=256, nf=4096, n_densities=10, stride=16, seed=0)
    wall = time.perf_counter() - t0
    ok = out["max_err"] < 1e-5 and wall < 120.0
    _report(4, ok, f"worst transmission error {out['max_err']:.2e} < 1e-5 "
            f"for 10 densities at n = 256, {wall:.0f} s < 120 s")
    assert out["max_err"] < 1e-5
    assert wall < 120.0


@pytest.mark.parametrize("kind", ["SD", "DS"])
def test_criterion_5_point_source_solves(kind):
    t0 = time.perf_counter()
    out = point_source_check(kind, n_coarse=128, n_fine=256, s=2.0 + 3.0j)
    wall = time.perf_counter() - t0
    ok = out["fine"] < 1e-8 and out["ratio"] > 1e2 and wall < 60.0
    _report(5, ok, f"{kind}: field error {out['fine']:.2e} < 1e-8 at "
            f"n = 256, convergence ratio {out['ratio']:.1f} > 100, "
            f"{wall:.1f} s < 60 s")
    assert out["fine"] < 1e-8
    assert out["ratio"] > 1e2
    assert wall < 60.0


def test_criterion_6_coercivity_trend():
    p = PhysicalParams(rho=1.0, lam=1.0, mu=1.0, kappa=1.0, gamma=1.0,
                       eta=1.0)
    curve = make_circle(radius=1.0, n=128)
    t0 = time.perf_counter()
    min_real = np.inf
    for kind in ("SD", "DS"):
        for s in (1.0 + 0.0j, 1.0 + 5.0j, 0.1 + 10.0j):
            rep = probe_coercivity(kind, curve, p, s, n_probe=12, seed=0)
            min_real = min(min_real, rep.min_real)
    ratios = np.array([probe_coercivity("SD", curve, p, 1.0 + 1j * im,
                                        n_probe=4, seed=0)
                       .bound_ratio_sobolev for im in range(0, 65)])
    wall = time.perf_counter() - t0
    spread = float(ratios.max() / ratios.min())
    ok = min_real > 0.0 and spread < 50.0 and wall < 300.0
    _report(6, ok, f"min pairing real part {min_real:.3g} > 0; sweep ratio "
            f"max/min {spread:.3g} < 50; {wall:.0f} s < 300 s")
    assert min_real > 0.0
    assert wall < 300.0
    # The envelope ratio is bounded above along the sweep but decays by
    # orders of magnitude (the |s|^4 envelope is loose on the circle), so
    # the literal max/min bound is not attainable; asserted as specified.
    assert spread < 50.0


def test_criterion_7_cq_convergence(session_cache):
    p = PhysicalParams(rho=1.0, lam=1.0, mu=1.0, kappa=1.0, gamma=1.0,
                       eta=1.0)
    n = 128
    curve = make_circle(radius=1.0, n=n)
    y0 = np.array([0.3, -0.2])
    charge = np.array([1.0, -0.5, 0.8])
    obs = np.array([[2.0, 0.0], [0.0, 2.2], [-1.8, -1.1]])
    horizon = 4.0

    def run(n_steps):
        cfg = CQConfig(dt=horizon / n_steps, n_steps=n_steps)
        s_nodes = cq_frequencies(cfg)
        psihat = cq_forward(smooth_ramp(cfg.times), cfg.R, cfg.N)
        rhs_all = np.zeros((3 * n, cfg.N), dtype=complex)
        for l in range(cfg.N // 2 + 1):
            rhs_all[:, l] = point_source_rhs("SD", curve, p,
                                             complex(s_nodes[l]), y0,
                                             charge)
            lm = (cfg.N - l) % cfg.N
            if lm != l:
                rhs_all[:, lm] = np.conj(rhs_all[:, l])
        g = cq_inverse(rhs_all * psihat, cfg.R, cfg.N).real
        return march("SD", curve, p, TimeSignal(g, cfg.dt), obs, cfg,
                     threads=THREADS, cache_dir=session_cache)

    t0 = time.perf_counter()
    ref = run(1024)
    scale = float(np.abs(ref.values).max())
    errs = {}
    for m in (64, 128, 256):
        u = run(m).values
        errs[m] = float(np.abs(u - ref.values[:, :, ::1024 // m]).max()
                        / scale)
    orders = [math.log2(errs[a] / errs[b]) for a, b in ((64, 128),
                                                        (128, 256))]
    imag = float(np.abs(ref.values.imag).max()
                 / np.abs(ref.values.real).max())

    # causality at full strength: delayed exactly-causal data marches to
    # exact zeros before the onset
    cfg = CQConfig(dt=horizon / 64, n_steps=64)
    delay = 8 * cfg.dt
    g = np.outer(np.ones(3 * n), smooth_ramp(cfg.times - delay))
    caus_run = march("SD", curve, p, TimeSignal(g, cfg.dt), obs, cfg,
                     threads=THREADS, cache_dir=session_cache)
    caus = caus_run.max_abs_before(delay) / np.abs(caus_run.values).max()
    wall = time.perf_counter() - t0

    ok = (min(orders) >= 1.8 and caus < 1e-10 and imag < 1e-8
          and wall < 600.0)
    _report(7, ok, f"orders {orders[0]:.2f}, {orders[1]:.2f} >= 1.8; "
            f"causality {caus:.1e} < 1e-10; imaginary part {imag:.1e} "
            f"< 1e-8; {wall:.0f} s < 600 s")
    assert min(orders) >= 1.8
    assert caus < 1e-10
    assert imag < 1e-8
    assert wall < 600.0


def test_criterion_8_determinism_and_plumbing(verify_fast_runs):
    a, b = verify_fast_runs
    ok = (a["exit"] == 0 and b["exit"] == 0 and a["wall"] < 120.0
          and b["wall"] < 120.0 and a["payload"] == b["payload"]
          and len(a["payload"]) > 0)
    _report(8, ok, f"verify --tier fast exit codes {a['exit']}/{b['exit']}, "
            f"walls {a['wall']:.0f} s/{b['wall']:.0f} s < 120 s, reports "
            f"byte-identical: {a['payload'] == b['payload']}")
    assert a["exit"] == 0, a["stderr"].decode()
    assert b["exit"] == 0
    assert a["wall"] < 120.0
    assert b["wall"] < 120.0
    assert len(a["payload"]) > 0
    assert a["payload"] == b["payload"]
