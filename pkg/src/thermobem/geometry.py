"""Smooth closed boundary curves discretized on staggered periodic grids.

Densities live at the equispaced parameter nodes t_j = 2 pi j / n; equations
are collocated at the midpoints t_j + pi / n.  Staggering keeps every kernel
evaluation away from the diagonal r = 0 while both grids stay uniform, so
spectral differentiation and trigonometric interpolation apply on each.

Curves are parametrized counterclockwise; the outward unit normal is then
(x2', -x1') / |x'|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ParameterDomainError

#: smallest admissible grid; boundary operators enforce their own floor.
MIN_POINTS = 8


@dataclass
class BoundaryCurve:
    """A closed curve sampled on node and midpoint grids.

    chart(t) must return (x, dx) with shapes (m, 2): positions and parameter
    derivatives of a counterclockwise parametrization over [0, 2 pi).
    """

    kind: str
    params: dict
    n: int
    chart: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

    t_node: np.ndarray = field(init=False)
    t_mid: np.ndarray = field(init=False)
    x_node: np.ndarray = field(init=False)
    x_mid: np.ndarray = field(init=False)
    jac_node: np.ndarray = field(init=False)
    jac_mid: np.ndarray = field(init=False)
    tangent_node: np.ndarray = field(init=False)
    tangent_mid: np.ndarray = field(init=False)
    normal_node: np.ndarray = field(init=False)
    normal_mid: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.n
        if n < MIN_POINTS or n % 2 != 0:
            raise ParameterDomainError(
                f"grid size must be an even integer >= {MIN_POINTS}, got {n}"
            )
        h = 2.0 * np.pi / n
        self.t_node = h * np.arange(n)
        self.t_mid = self.t_node + 0.5 * h
        for which, t in (("node", self.t_node), ("mid", self.t_mid)):
            x, dx = self.chart(t)
            x = np.asarray(x, dtype=float).reshape(n, 2)
            dx = np.asarray(dx, dtype=float).reshape(n, 2)
            jac = np.hypot(dx[:, 0], dx[:, 1])
            if np.any(jac <= 0):
                raise ParameterDomainError("curve parametrization degenerates")
            tau = dx / jac[:, None]
            nrm = np.stack([tau[:, 1], -tau[:, 0]], axis=1)
            setattr(self, f"x_{which}", x)
            setattr(self, f"jac_{which}", jac)
            setattr(self, f"tangent_{which}", tau)
            setattr(self, f"normal_{which}", nrm)

    @property
    def h(self) -> float:
        return 2.0 * np.pi / self.n

    @property
    def diameter(self) -> float:
        x = self.x_node
        return float(np.max(np.linalg.norm(x[:, None, :] - x[None, :, :],
                                           axis=-1)))

    def with_n(self, n: int) -> "BoundaryCurve":
        """Same curve on a different grid size."""
        return BoundaryCurve(kind=self.kind, params=dict(self.params),
                             n=n, chart=self.chart)

    def spec(self) -> dict:
        """JSON-serializable description (cache keys, manifests)."""
        return {"kind": self.kind, "params": dict(self.params), "n": self.n}


def make_circle(radius: float = 1.0, n: int = 64,
                center: tuple[float, float] = (0.0, 0.0)) -> BoundaryCurve:
    """Counterclockwise circle of given radius."""
    if not radius > 0:
        raise ParameterDomainError(f"radius must be positive, got {radius}")
    cx, cy = float(center[0]), float(center[1])

    def chart(t):
        t = np.asarray(t, dtype=float)
        x = np.stack([cx + radius * np.cos(t), cy + radius * np.sin(t)], axis=1)
        dx = np.stack([-radius * np.sin(t), radius * np.cos(t)], axis=1)
        return x, dx

    return BoundaryCurve(kind="circle",
                         params={"radius": float(radius), "center": [cx, cy]},
                         n=n, chart=chart)


def make_kite(n: int = 64, scale: float = 1.0) -> BoundaryCurve:
    """Non-convex kite-shaped test curve, counterclockwise."""
    if not scale > 0:
        raise ParameterDomainError(f"scale must be positive, got {scale}")
    a = float(scale)

    def chart(t):
        t = np.asarray(t, dtype=float)
        x = np.stack([a * (np.cos(t) + 0.65 * np.cos(2.0 * t) - 0.65),
                      a * 1.5 * np.sin(t)], axis=1)
        dx = np.stack([a * (-np.sin(t) - 1.3 * np.sin(2.0 * t)),
                       a * 1.5 * np.cos(t)], axis=1)
        return x, dx

    return BoundaryCurve(kind="kite", params={"scale": a}, n=n, chart=chart)


def make_curve(kind: str, n: int, **params) -> BoundaryCurve:
    """Factory by name: 'circle' (radius, center) or 'kite' (scale)."""
    if kind == "circle":
        return make_circle(radius=params.get("radius", 1.0), n=n,
                           center=tuple(params.get("center", (0.0, 0.0))))
    if kind == "kite":
        return make_kite(n=n, scale=params.get("scale", 1.0))
    raise ParameterDomainError(f"unknown curve kind {kind!r}")
