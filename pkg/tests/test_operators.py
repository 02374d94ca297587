"""Boundary operators: solves, potentials, traces, energy pairing."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermobem import (ConditioningError, PhysicalParams, eval_potential,
                       make_circle, make_kite, point_source_field,
                       point_source_rhs, probe_coercivity, solve_bie)
from thermobem.operators import Assembler, field_traces

UNIT = PhysicalParams(rho=1.0, lam=1.0, mu=1.0, kappa=1.0, gamma=1.0,
                      eta=1.0)
MIXED = PhysicalParams(rho=1.3, lam=2.1, mu=0.9, kappa=0.7, gamma=1.1,
                       eta=0.6)
S = 2.0 + 3.0j


@pytest.fixture(scope="module")
def circle96():
    return make_circle(radius=1.0, n=96)


@pytest.mark.parametrize("kind", ["SD", "DS"])
def test_point_source_solve_reproduces_field(kind, circle96):
    y0 = np.array([0.3, -0.2])
    charge = np.array([0.7, -0.4, 1.1])
    obs = np.array([[2.0, 0.5], [-1.8, 1.1], [0.2, -2.4]])
    rhs = point_source_rhs(kind, circle96, MIXED, S, y0, charge)
    sol = solve_bie(kind, circle96, MIXED, S, rhs)
    assert sol.residual < 1e-10
    potk = "QSD" if kind == "SD" else "QDS"
    got = eval_potential(potk, circle96, MIXED, S, sol.density, obs)
    ref, _ = point_source_field(obs, None, MIXED, S, y0, charge)
    assert np.abs(got - ref).max() / np.abs(ref).max() < 1e-8


@pytest.mark.parametrize("kind", ["SD", "DS"])
def test_interior_solve_reproduces_field(kind, circle96):
    # source outside, observation inside: the same operator serves the
    # interior problem
    y0 = np.array([2.5, 0.4])
    charge = np.array([0.7, -0.4, 1.1])
    obs = np.array([[0.2, 0.1], [-0.4, 0.3], [0.1, -0.5]])
    rhs = point_source_rhs(kind, circle96, MIXED, S, y0, charge)
    sol = solve_bie(kind, circle96, MIXED, S, rhs)
    potk = "QSD" if kind == "SD" else "QDS"
    got = eval_potential(potk, circle96, MIXED, S, sol.density, obs)
    ref, _ = point_source_field(obs, None, MIXED, S, y0, charge)
    assert np.abs(got - ref).max() / np.abs(ref).max() < 1e-8


def test_kite_self_convergence():
    y0 = np.array([-1.05, 1.18])
    charge = np.array([1.0, -0.5, 0.8])
    obs = np.array([[2.5, 1.0], [-2.8, -0.7]])
    errs = {}
    for n in (64, 128):
        curve = make_kite(n=n)
        rhs = point_source_rhs("SD", curve, UNIT, S, y0, charge)
        sol = solve_bie("SD", curve, UNIT, S, rhs)
        got = eval_potential("QSD", curve, UNIT, S, sol.density, obs)
        ref, _ = point_source_field(obs, None, UNIT, S, y0, charge)
        errs[n] = np.abs(got - ref).max() / np.abs(ref).max()
    assert errs[64] / errs[128] > 30.0


def test_assembler_reuse_matches_direct(circle96):
    rhs = point_source_rhs("SD", circle96, UNIT, S, np.array([0.3, -0.2]),
                           np.array([1.0, 0.5, -0.3]))
    asm = Assembler(circle96, UNIT, S)
    a = solve_bie("SD", circle96, UNIT, S, rhs, assembler=asm)
    b = solve_bie("SD", circle96, UNIT, S, rhs)
    assert np.array_equal(a.density, b.density)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_potential_linearity(a, b):
    curve = make_circle(radius=1.0, n=32)
    rng = np.random.default_rng(7)
    d1 = rng.normal(size=96) + 1j * rng.normal(size=96)
    d2 = rng.normal(size=96) + 1j * rng.normal(size=96)
    obs = np.array([[2.0, 0.4]])
    u1 = eval_potential("QSD", curve, UNIT, S, d1, obs)
    u2 = eval_potential("QSD", curve, UNIT, S, d2, obs)
    u12 = eval_potential("QSD", curve, UNIT, S, a * d1 + b * d2, obs)
    sc = max(np.abs(u1).max(), np.abs(u2).max(), 1e-30)
    assert np.abs(u12 - (a * u1 + b * u2)).max() / sc < 1e-12


def test_point_source_traces_consistent(circle96):
    # the SD rhs equals the SD field traces of the exact source field
    y0 = np.array([0.3, -0.2])
    charge = np.array([1.0, -0.5, 0.8])
    rhs = point_source_rhs("SD", circle96, MIXED, S, y0, charge)
    pts = circle96.x_mid
    vals, grads = point_source_field(pts, None, MIXED, S, y0, charge)
    traces = field_traces("SD", vals, grads, circle96.normal_mid, MIXED, S)
    assert np.abs(traces - rhs).max() / np.abs(rhs).max() < 1e-12


@pytest.mark.parametrize("kind", ["SD", "DS"])
def test_energy_pairing_positive(kind, circle96):
    for s in (1.0 + 0.0j, 1.0 + 5.0j, 0.1 + 10.0j):
        rep = probe_coercivity(kind, circle96, UNIT, s, n_probe=8, seed=1)
        assert rep.min_real > 0.0


def test_degenerate_frequency_rejected():
    curve = make_circle(radius=1.0, n=32)
    rhs = np.ones(96, dtype=complex)
    with pytest.raises(Exception):
        solve_bie("SD", curve, UNIT, 0.0 + 1.0j, rhs)
