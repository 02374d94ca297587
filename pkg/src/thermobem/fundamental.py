"""Fundamental solution of the thermoelastic pseudo-oscillation system.

The (d+1) x (d+1) matrix E(x, y; s) solves, columnwise in x for x != y,

    mu Lap u + (lambda + mu) grad div u - rho s^2 u - gamma grad theta = 0,
    Lap theta - (s/kappa) theta - s eta div u = 0.

Every entry is a linear combination of the scalar radial kernels
g_k(r) = g(|x - y|; lambda_k) of the three wave-number modes:

    E_ij   = sum_k a_k d_i d_j g_k + c3 g_3 delta_ij       (elastic block)
    E_iD   = b_col d_i (g_1 - g_2)                          (coupling column)
    E_Dj   = b_row d_j (g_1 - g_2)                          (coupling row)
    E_DD   = c1 g_1 + c2 g_2                                (thermal corner)

with derivatives acting in x and coefficients

    a_1 = (lp^2 - l2^2) / (rho s^2 dl),   a_2 = -(lp^2 - l1^2) / (rho s^2 dl),
    a_3 = -1 / (rho s^2),                 c3  = l3^2 / (rho s^2),
    b_col = gamma lp^2 / (rho s^2 dl),    b_row = s eta lp^2 / (rho s^2 dl),
    c1 = (l1^2 - lp^2) / dl,              c2 = -(l2^2 - lp^2) / dl,

where dl = l1^2 - l2^2 and lp is the uncoupled pressure wave number.  Note
a_1 + a_2 + a_3 = 0, which cancels the strongest (1/r^d) singularities of
the elastic block and leaves a weakly singular kernel.

The adjoint system replaces gamma -> -s eta and s eta -> -gamma and acts
in the source variable, which flips the sign of the single-gradient
coupling entries; the net identity E*(x, y) = E(x, y)^T is exposed through
``eval_E_adjoint`` (substitution route) and tested against the transpose.

For 2D Nystrom assembly the same contraction code runs on the ln(r)
coefficient tuples of the radial kernels (``part="logcoef"``), yielding the
exact log coefficient of every kernel entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError, SingularityError
from .kernels import radial_log_parts, radial_parts
from .params import LaplaceFrequency, PhysicalParams, WaveNumbers, compute_wave_numbers

#: log-splitting is disabled for a mode once Re(lambda) * max r exceeds this;
#: beyond it the I-Bessel growth destroys the split numerically while the
#: kernel itself is exponentially negligible away from the diagonal.
MAX_LOG_ARG = 25.0


@dataclass(frozen=True)
class ModeCoefficients:
    """Scalar combination coefficients of the three radial modes."""

    a1: complex
    a2: complex
    a3: complex
    c3: complex
    b_col: complex
    b_row: complex
    c1: complex
    c2: complex


def mode_coefficients(params: PhysicalParams, s: complex,
                      wn: WaveNumbers, adjoint: bool = False) -> ModeCoefficients:
    """Combination coefficients of E (or of the adjoint system's E*).

    The adjoint route swaps gamma <-> -s eta and flips the sign of the
    single-gradient coupling entries (gradients act in the source point).
    """
    s = complex(s)
    l1sq = wn.lambda1 ** 2
    l2sq = wn.lambda2 ** 2
    l3sq = wn.lambda3 ** 2
    lpsq = wn.lambda_p ** 2
    dl = l1sq - l2sq
    rs2 = params.rho * s * s

    base = lpsq / (rs2 * dl)
    if adjoint:
        # coefficient swap plus source-variable gradient sign
        b_col = -(-s * params.eta) * base
        b_row = -(-params.gamma) * base
    else:
        b_col = params.gamma * base
        b_row = s * params.eta * base

    return ModeCoefficients(
        a1=(lpsq - l2sq) / (rs2 * dl),
        a2=-(lpsq - l1sq) / (rs2 * dl),
        a3=-1.0 / rs2,
        c3=l3sq / rs2,
        b_col=b_col,
        b_row=b_row,
        c1=(l1sq - lpsq) / dl,
        c2=-(l2sq - lpsq) / dl,
    )


@dataclass
class KernelJet:
    """E and its x-derivatives evaluated on a broadcast point set.

    E            (..., d+1, d+1)
    dE           (..., d+1, d+1, d)   dE[..., c, m, k] = d E_cm / d x_k
    hess_col     (..., d, d, d)       d_k d_l E_{i, D}     (i, k, l)
    hess_row     (..., d, d, d)       d_k d_l E_{D, j}     (j, k, l)
    hess_corner  (..., d, d)          d_k d_l E_{D, D}     (k, l)
    """

    dim: int
    E: np.ndarray
    dE: np.ndarray | None = None
    hess_col: np.ndarray | None = None
    hess_row: np.ndarray | None = None
    hess_corner: np.ndarray | None = None


def _radial_tuples(dim: int, wn: WaveNumbers, r: np.ndarray, n_derivs: int,
                   part: str, max_log_arg: float):
    """Per-mode radial derivative tuples, value or log-coefficient part."""
    lams = (wn.lambda1, wn.lambda2, wn.lambda3)
    if part == "value":
        return [radial_parts(dim, lam, r, n_derivs=n_derivs) for lam in lams]
    if part != "logcoef":
        raise ParameterDomainError(f"unknown kernel part {part!r}")
    if dim != 2:
        raise ParameterDomainError("log-coefficient splitting is a 2D device")
    r_max = float(np.max(r))
    zeros = np.zeros_like(np.asarray(r, dtype=float), dtype=complex)
    tuples = []
    for lam in lams:
        if complex(lam).real * r_max > max_log_arg:
            tuples.append(tuple(zeros for _ in range(n_derivs + 1)))
        else:
            tuples.append(radial_log_parts(lam, r, n_derivs=n_derivs))
    return tuples


def eval_kernel_jet(dim: int, x, y, params: PhysicalParams,
                    s: complex | LaplaceFrequency, *,
                    wn: WaveNumbers | None = None,
                    part: str = "value",
                    with_grad: bool = True,
                    with_hessians: bool = False,
                    adjoint: bool = False,
                    max_log_arg: float = MAX_LOG_ARG) -> KernelJet:
    """Evaluate E (and optionally its x-jet) on broadcast point arrays.

    Parameters
    ----------
    dim : 2 or 3.
    x, y : arrays broadcastable to (..., dim); x != y everywhere.
    part : "value" for the kernels, "logcoef" for their ln(r) coefficients
        (2D only; modes with Re(lambda) max(r) > max_log_arg contribute zero).
    with_grad : include dE (first x-derivatives of every entry).
    with_hessians : include second x-derivatives of the coupling entries
        and thermal corner (needs third radial derivatives).
    adjoint : assemble the adjoint system's fundamental solution E*(x, y),
        which equals E(x, y)^T.

    Returns
    -------
    KernelJet with complex arrays of shape (..., d+1, d+1) etc.
    """
    if isinstance(s, LaplaceFrequency):
        s = s.s
    s = complex(s)
    if wn is None:
        wn = compute_wave_numbers(params, s)
    if dim not in (2, 3):
        raise ParameterDomainError(f"dim must be 2 or 3, got {dim}")

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != dim or y.shape[-1] != dim:
        raise ParameterDomainError(
            f"point arrays must have trailing dimension {dim}"
        )
    dvec = x - y                                     # (..., d)
    r = np.sqrt(np.sum(dvec * dvec, axis=-1))        # (...,)
    if np.any(r == 0):
        raise SingularityError("fundamental solution evaluated at x == y")
    e = dvec / r[..., None]                          # unit direction, (..., d)

    n_derivs = 3 if (with_grad or with_hessians) else 2
    tup = _radial_tuples(dim, wn, r, n_derivs, part, max_log_arg)
    co = mode_coefficients(params, s, wn, adjoint=adjoint)
    a = (co.a1, co.a2, co.a3)

    dd = dim + 1
    base_shape = r.shape
    eye = np.eye(dim)

    # ---- second-derivative tensors per mode:  dd g = A e e^T + B I ----
    ee = e[..., :, None] * e[..., None, :]           # (..., d, d)
    ddg = []
    for k in range(3):
        g, g1, g2 = tup[k][0], tup[k][1], tup[k][2]
        A = g2 - g1 / r
        B = g1 / r
        ddg.append(A[..., None, None] * ee + B[..., None, None] * eye)

    E = np.zeros(base_shape + (dd, dd), dtype=complex)

    # elastic block
    el = a[0] * ddg[0] + a[1] * ddg[1] + a[2] * ddg[2]
    el += co.c3 * tup[2][0][..., None, None] * eye
    E[..., :dim, :dim] = el

    # coupling column / row:  b * d(g1 - g2)
    dg12 = (tup[0][1] - tup[1][1])[..., None] * e    # (..., d)
    E[..., :dim, dim] = co.b_col * dg12
    E[..., dim, :dim] = co.b_row * dg12

    # thermal corner
    E[..., dim, dim] = co.c1 * tup[0][0] + co.c2 * tup[1][0]

    jet = KernelJet(dim=dim, E=E)
    if not (with_grad or with_hessians):
        return jet

    # ---- third-derivative tensors per mode ----
    # d_l d_i d_j g = (A' - 2A/r) e_i e_j e_l + (A/r)(d_li e_j + d_lj e_i)
    #                 + B' e_l d_ij
    eee = ee[..., :, :, None] * e[..., None, None, :]  # (..., d, d, d)
    sym_id = (eye[:, None, :] * np.ones(dim)[None, :, None])  # d_li e_j pattern helper
    dddg = []
    for k in range(3):
        g1, g2, g3 = tup[k][1], tup[k][2], tup[k][3]
        A = g2 - g1 / r
        Ap = g3 - g2 / r + g1 / (r * r)
        Bp = g2 / r - g1 / (r * r)
        t = (Ap - 2.0 * A / r)[..., None, None, None] * eee
        Ar = (A / r)[..., None, None, None]
        # (d_li e_j + d_lj e_i) with index order (i, j, l)
        t += Ar * (eye[:, None, :] * e[..., None, :, None]
                   + eye[None, :, :] * e[..., :, None, None])
        t += Bp[..., None, None, None] * (e[..., None, None, :] * eye[:, :, None])
        dddg.append(t)
    del sym_id

    ddg12 = ddg[0] - ddg[1]                          # (..., d, d)
    dg3 = tup[2][1][..., None] * e                   # (..., d)
    dg1 = tup[0][1][..., None] * e
    dg2 = tup[1][1][..., None] * e

    if with_grad:
        dE = np.zeros(base_shape + (dd, dd, dim), dtype=complex)
        d_el = a[0] * dddg[0] + a[1] * dddg[1] + a[2] * dddg[2]
        d_el += co.c3 * dg3[..., None, None, :] * eye[:, :, None]
        dE[..., :dim, :dim, :] = d_el
        dE[..., :dim, dim, :] = co.b_col * ddg12
        dE[..., dim, :dim, :] = co.b_row * ddg12
        dE[..., dim, dim, :] = co.c1 * dg1 + co.c2 * dg2
        jet.dE = dE

    if with_hessians:
        ddd12 = dddg[0] - dddg[1]                    # (..., d, d, d)
        jet.hess_col = co.b_col * ddd12
        jet.hess_row = co.b_row * ddd12
        jet.hess_corner = co.c1 * ddg[0] + co.c2 * ddg[1]

    return jet


def eval_E(dim: int, x, y, params: PhysicalParams,
           s: complex | LaplaceFrequency, *,
           wn: WaveNumbers | None = None) -> np.ndarray:
    """Fundamental solution matrix E(x, y; s), shape (..., d+1, d+1)."""
    return eval_kernel_jet(dim, x, y, params, s, wn=wn,
                           with_grad=False).E


def eval_E_adjoint(dim: int, x, y, params: PhysicalParams,
                   s: complex | LaplaceFrequency, *,
                   wn: WaveNumbers | None = None,
                   route: str = "substitution") -> np.ndarray:
    """Fundamental solution E*(x, y; s) of the adjoint system.

    route = "substitution" builds it from the coupling-coefficient swap
    (gamma <-> -s eta, gradients in the source point); route = "transpose"
    returns E(x, y)^T.  The two agree identically.
    """
    if route == "substitution":
        return eval_kernel_jet(dim, x, y, params, s, wn=wn,
                               with_grad=False, adjoint=True).E
    if route == "transpose":
        E = eval_E(dim, x, y, params, s, wn=wn)
        return np.swapaxes(E, -1, -2)
    raise ParameterDomainError(f"unknown adjoint route {route!r}")
