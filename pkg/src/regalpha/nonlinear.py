"""Dealiased pseudo-spectral bilinear forms.

Products are formed pointwise on the collocation grid after truncating
both factors to the 2/3 band, and the result is truncated again, so the
retained coefficients of every quadratic term are alias-free.  The
inertial form carries an optional transpose-gradient term,

    advect(v, w, chi) = P[ (v.grad) w + chi * (grad v)^T w ],

with the transposed gradient falling on the *advecting* argument v.
That placement is what makes the form orthogonal to v itself,
<advect(v, w, 1), v> = 0 for solenoidal v, the identity behind the
chi = 1 members of the family; the chi = 0 form is orthogonal to w.
"""

from __future__ import annotations

import numpy as np

from .models import ModelParams, m_symbol, n_symbol
from .spectral import (
    Grid,
    apply_symbol,
    dealias,
    forward_transform,
    gradient,
    inverse_transform,
    l2_inner,
    laplacian,
    leray_project,
)


class NonlinearWorkspace:
    """Reusable real-space scratch buffers, one instance per thread."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self._pool: dict[tuple, np.ndarray] = {}

    def scratch(self, shape: tuple, dtype=np.float64) -> np.ndarray:
        key = (shape, np.dtype(dtype).str)
        buf = self._pool.get(key)
        if buf is None:
            buf = np.empty(shape, dtype=dtype)
            self._pool[key] = buf
        return buf


def _to_real(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    return inverse_transform(dealias(coeffs, grid), grid)


def _to_spec(samples: np.ndarray, grid: Grid) -> np.ndarray:
    return dealias(forward_transform(samples, grid), grid)


def b0_bar(
    v: np.ndarray,
    w: np.ndarray,
    chi: int,
    grid: Grid,
    ws: NonlinearWorkspace | None = None,
) -> np.ndarray:
    """Projected inertial form P[(v.grad)w + chi (grad v)^T w]."""
    if v.shape != w.shape or v.shape[-2:] != (grid.n, grid.n):
        raise ValueError("velocity fields must share the grid shape")
    vr = _to_real(v, grid)
    # dw[j, i] = d_j w_i on the collocation grid
    dw = _to_real(np.stack((grid.ik1 * w, grid.ik2 * w)), grid)
    adv = vr[0] * dw[0] + vr[1] * dw[1]
    if chi:
        wr = _to_real(w, grid)
        dv = _to_real(np.stack((grid.ik1 * v, grid.ik2 * v)), grid)
        # ((grad v)^T w)_i = sum_j w_j d_i v_j
        adv = adv + wr[0] * dv[:, 0] + wr[1] * dv[:, 1]
    return leray_project(_to_spec(adv, grid), grid)


def b0(p: ModelParams, u: np.ndarray, grid: Grid,
       ws: NonlinearWorkspace | None = None) -> np.ndarray:
    """Composite inertial term: advecting velocity Mu, advected velocity Nu."""
    mu = apply_symbol(u, m_symbol(p), grid)
    nu_ = apply_symbol(u, n_symbol(p), grid)
    return b0_bar(mu, nu_, p.chi, grid, ws)


def b1(p: ModelParams, u: np.ndarray, phi: np.ndarray, grid: Grid,
       ws: NonlinearWorkspace | None = None) -> np.ndarray:
    """Transport term (Nu).grad phi, componentwise for stacked fields."""
    nu_r = _to_real(apply_symbol(u, n_symbol(p), grid), grid)
    dphi = _to_real(np.stack((grid.ik1 * phi, grid.ik2 * phi)), grid)
    return _to_spec(nu_r[0] * dphi[0] + nu_r[1] * dphi[1], grid)


def korteweg_stress_form(p: ModelParams, phi: np.ndarray, grid: Grid,
                         ws: NonlinearWorkspace | None = None) -> np.ndarray:
    """Capillary force -eps * P[div(grad phi (x) grad phi)].

    Written through the stress tensor T_ij = sum_c d_i phi_c d_j phi_c.
    """
    comps = phi if phi.ndim == 3 else phi[None]
    n = grid.n
    t11 = np.zeros((n, n))
    t12 = np.zeros((n, n))
    t22 = np.zeros((n, n))
    for c in comps:
        d1, d2 = _to_real(np.stack((grid.ik1 * c, grid.ik2 * c)), grid)
        t11 += d1 * d1
        t12 += d1 * d2
        t22 += d2 * d2
    t11h, t12h, t22h = (_to_spec(t, grid) for t in (t11, t12, t22))
    div0 = grid.ik1 * t11h + grid.ik2 * t12h
    div1 = grid.ik1 * t12h + grid.ik2 * t22h
    return leray_project(-p.epsilon * np.stack((div0, div1)), grid)


def korteweg_convective_form(p: ModelParams, phi: np.ndarray, grid: Grid,
                             ws: NonlinearWorkspace | None = None) -> np.ndarray:
    """Capillary force -eps * P[(lap phi) grad phi].

    Equals the stress form after projection: the two differ by the pure
    gradient of |grad phi|^2/2, which the projection removes.  One
    product instead of three, so the stepper uses this route.
    """
    comps = phi if phi.ndim == 3 else phi[None]
    f0 = np.zeros((grid.n, grid.n))
    f1 = np.zeros((grid.n, grid.n))
    for c in comps:
        lap, d1, d2 = _to_real(
            np.stack((laplacian(c, grid), grid.ik1 * c, grid.ik2 * c)), grid
        )
        f0 += lap * d1
        f1 += lap * d2
    out = _to_spec(np.stack((f0, f1)), grid)
    return leray_project(-p.epsilon * out, grid)


def trilinear_form(a: np.ndarray, b: np.ndarray, c: np.ndarray, chi: int,
                   grid: Grid, ws: NonlinearWorkspace | None = None) -> float:
    """<advect(a, b, chi), c> with the L^2 pairing of the torus."""
    return l2_inner(b0_bar(a, b, chi, grid, ws), c, grid)


def trilinear_cancellation_defect(p: ModelParams, u: np.ndarray, grid: Grid) -> float:
    """|<B0(u, u), Eu>| relative to the cubic scale of u.

    E is the kinetic pairing weight; the defect is zero up to roundoff
    for every member of the family.
    """
    from .models import energy_pairing_symbol
    from .spectral import sobolev_norm

    mu = apply_symbol(u, m_symbol(p), grid)
    nu_ = apply_symbol(u, n_symbol(p), grid)
    eu = apply_symbol(u, energy_pairing_symbol(p), grid)
    value = trilinear_form(mu, nu_, eu, p.chi, grid)
    scale = max(sobolev_norm(u, 1.0, grid) ** 3, 1e-30)
    return abs(value) / scale
