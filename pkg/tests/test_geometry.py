"""Boundary curves: parametrization, normals, refinement, factory."""

import numpy as np
import pytest

from thermobem import ParameterDomainError, make_circle, make_curve, \
    make_kite


@pytest.mark.parametrize("curve", [make_circle(radius=1.3, n=64),
                                   make_kite(n=64)])
def test_node_midpoint_stagger(curve):
    assert curve.t_node.shape == (curve.n,)
    assert np.allclose(curve.t_mid, curve.t_node + curve.h / 2)
    assert curve.x_node.shape == (curve.n, 2)


@pytest.mark.parametrize("curve", [make_circle(radius=2.0, n=128),
                                   make_kite(n=128)])
def test_normals_unit_and_outward(curve):
    lens = np.linalg.norm(curve.normal_node, axis=1)
    assert np.allclose(lens, 1.0, atol=1e-13)
    # outward: moving along the normal increases distance from an interior
    # point (the centroid)
    c = curve.x_node.mean(axis=0)
    d0 = np.linalg.norm(curve.x_node - c, axis=1)
    d1 = np.linalg.norm(curve.x_node + 1e-3 * curve.normal_node - c, axis=1)
    assert np.all(d1 > d0)


def test_circle_circumference():
    curve = make_circle(radius=1.7, n=256)
    length = curve.h * curve.jac_node.sum()
    assert length == pytest.approx(2 * np.pi * 1.7, rel=1e-12)


def test_with_n_same_shape():
    curve = make_kite(n=64)
    fine = curve.with_n(256)
    assert fine.n == 256
    assert fine.kind == curve.kind
    # coarse nodes are a subset of the fine ones (same chart)
    assert np.allclose(fine.x_node[::4], curve.x_node, atol=1e-13)


def test_factory_roundtrip():
    curve = make_curve("circle", 32, radius=0.5, center=(1.0, -2.0))
    spec = curve.spec()
    again = make_curve(spec["kind"], spec["n"], **spec["params"])
    assert np.array_equal(again.x_node, curve.x_node)


def test_factory_rejects_unknown():
    with pytest.raises(ParameterDomainError):
        make_curve("triangle", 32)
    with pytest.raises(ParameterDomainError):
        make_circle(radius=-1.0)
