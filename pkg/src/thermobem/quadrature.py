"""Periodic quadrature and spectral calculus on staggered uniform grids.

Integrals over a closed curve split each kernel as

    K(t, tau) = A(t, tau) ln(4 sin^2((t - tau)/2)) + B(t, tau)

with A, B smooth and 2 pi-periodic (B may carry an odd Cauchy-type pole,
which the symmetric staggered trapezoid rule integrates spectrally).  The
quadrature combines the plain trapezoid sum of K with the product-rule
correction

    Q f(t) ~ h sum_j K(t, tau_j) f_j
             + sum_j A(t, tau_j) [R_j(t) - h ln(4 sin^2((t - tau_j)/2))] f_j,

where R_j(t) are the exact weights of the log kernel against trigonometric
interpolation from the source nodes tau_j:

    R_j(t) = -(4 pi / n) sum_{m=1}^{n/2 - 1} cos(m (t - tau_j)) / m
             - (4 pi / n^2) cos((n/2)(t - tau_j)).

Collocation targets t are the midpoints of the source grid, so t - tau_j
never vanishes and no diagonal limits are needed.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterDomainError


def _check_even(n: int) -> int:
    if n < 2 or n % 2 != 0:
        raise ParameterDomainError(f"grid size must be even and >= 2, got {n}")
    return n


def kress_log_weights(t_tgt: np.ndarray, t_src: np.ndarray) -> np.ndarray:
    """Product-quadrature weights R[i, j] for the ln(4 sin^2((t-tau)/2)) kernel.

    Exact for densities in the trig-interpolation space of the n source
    nodes; valid for arbitrary (off-grid) targets.
    """
    t_tgt = np.asarray(t_tgt, dtype=float)
    t_src = np.asarray(t_src, dtype=float)
    n = _check_even(t_src.size)
    u = t_tgt[:, None] - t_src[None, :]                 # (m, n)
    m_modes = np.arange(1, n // 2)                      # 1 .. n/2-1
    R = np.zeros_like(u)
    if m_modes.size:
        R = -(4.0 * np.pi / n) * np.tensordot(
            np.cos(np.multiply.outer(u, m_modes)), 1.0 / m_modes, axes=([2], [0])
        )
    R -= (4.0 * np.pi / n ** 2) * np.cos(0.5 * n * u)
    return R


def log_kernel_values(t_tgt: np.ndarray, t_src: np.ndarray) -> np.ndarray:
    """Matrix L[i, j] = ln(4 sin^2((t_i - tau_j)/2)); grids must not collide."""
    u = np.asarray(t_tgt, dtype=float)[:, None] - np.asarray(t_src, float)[None, :]
    s2 = 4.0 * np.sin(0.5 * u) ** 2
    if np.any(s2 == 0.0):
        raise ParameterDomainError("log kernel evaluated at a coincident pair")
    return np.log(s2)


def log_quadrature_matrix(Kval: np.ndarray, Klog: np.ndarray,
                          jac_src: np.ndarray,
                          t_tgt: np.ndarray, t_src: np.ndarray,
                          R: np.ndarray | None = None,
                          L: np.ndarray | None = None) -> np.ndarray:
    """Nystrom matrix of int K(t, tau) f(tau) jac(tau) d tau on node values.

    Kval[i, j]: kernel at (t_i, tau_j); Klog[i, j]: coefficient of ln(r) in
    the kernel (ln r = (1/2) ln(4 sin^2((t-tau)/2)) + smooth).  Pass
    precomputed R and L matrices to amortize them across kernels.
    """
    n = _check_even(np.asarray(t_src).size)
    h = 2.0 * np.pi / n
    if R is None:
        R = kress_log_weights(t_tgt, t_src)
    if L is None:
        L = log_kernel_values(t_tgt, t_src)
    A = 0.5 * Klog * jac_src[None, :]
    return h * Kval * jac_src[None, :] + A * (R - h * L)


def trapezoid_matrix(Kval: np.ndarray, jac_src: np.ndarray, n: int) -> np.ndarray:
    """Plain periodic trapezoid Nystrom matrix (smooth or Cauchy-PV kernels)."""
    h = 2.0 * np.pi / _check_even(n)
    return h * Kval * jac_src[None, :]


def spectral_diff_matrix(n: int) -> np.ndarray:
    """d/dt on a uniform periodic grid of n (even) points.

    D[i, j] = (1/2)(-1)^(i-j) cot((t_i - t_j)/2), zero diagonal; valid for
    any uniform grid (node or midpoint) since entries depend only on i - j.
    """
    n = _check_even(n)
    k = np.arange(n)
    d = k[:, None] - k[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        D = 0.5 * (-1.0) ** d / np.tan(np.pi * d / n)
    np.fill_diagonal(D, 0.0)
    return D


def interp_nodes_to_targets(t_tgt: np.ndarray, t_src: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation matrix from n source nodes to targets.

    Uses the balanced even-degree interpolant (cos(n t / 2) top mode), the
    same space the log product rule is exact on.
    """
    t_tgt = np.asarray(t_tgt, dtype=float)
    t_src = np.asarray(t_src, dtype=float)
    n = _check_even(t_src.size)
    u = t_tgt[:, None] - t_src[None, :]
    m_modes = np.arange(1, n // 2)
    P = np.ones_like(u)
    if m_modes.size:
        P += 2.0 * np.cos(np.multiply.outer(u, m_modes)).sum(axis=2)
    P += np.cos(0.5 * n * u)
    return P / n


def interp_nodes_to_mid(n: int) -> np.ndarray:
    """Trig interpolation from nodes t_j to staggered midpoints t_j + h/2."""
    h = 2.0 * np.pi / _check_even(n)
    t = h * np.arange(n)
    return interp_nodes_to_targets(t + 0.5 * h, t)
