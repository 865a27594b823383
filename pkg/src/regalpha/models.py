"""Model family parameterization.

A model is a point (theta, theta1, theta2, chi) in the regularization
family, together with the filter length alpha, viscosity nu, interface
width epsilon and the quartic double-well coefficient gamma3.  The
dissipation operator, the advecting/advected velocity filters and the
kinetic-energy pairing weight are all Fourier multipliers produced here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .spectral import Symbol

A0_FAMILIES = ("fractional", "voight")
ORDER_PARAMS = ("none", "scalar", "vector")


@dataclass(frozen=True)
class ModelParams:
    theta: float = 1.0
    theta1: float = 0.0
    theta2: float = 0.0
    chi: int = 0
    alpha: float = 0.2
    nu: float = 1.0
    epsilon: float = 0.1
    gamma3: float = 1.0
    a0_family: str = "fractional"
    order_param: str = "scalar"
    el_components: int = 2
    el_gamma: float = 1.0

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError(f"dissipation exponent must be >= 0, got {self.theta}")
        if self.chi not in (0, 1):
            raise ValueError(f"chi must be 0 or 1, got {self.chi}")
        if self.alpha <= 0:
            raise ValueError(f"filter length alpha must be > 0, got {self.alpha}")
        if self.nu < 0:
            raise ValueError(f"viscosity must be >= 0, got {self.nu}")
        if self.epsilon <= 0:
            raise ValueError(f"interface width epsilon must be > 0, got {self.epsilon}")
        if self.gamma3 <= 0:
            raise ValueError(f"well coefficient gamma3 must be > 0, got {self.gamma3}")
        if self.a0_family not in A0_FAMILIES:
            raise ValueError(f"unknown dissipation family {self.a0_family!r}")
        if self.order_param not in ORDER_PARAMS:
            raise ValueError(f"unknown order-parameter kind {self.order_param!r}")
        if self.order_param == "vector" and self.el_components not in (2, 3):
            raise ValueError("vector order parameter supports 2 or 3 components")
        if self.el_gamma <= 0:
            raise ValueError(f"relaxation rate must be > 0, got {self.el_gamma}")


# Named members of the family.  Each row fixes the dissipation exponent,
# the exponents of the advecting (theta1) and advected (theta2) Helmholtz
# filters, and whether the transpose-gradient term is present (chi).
# The chi=1 rows place the smoothing on the advecting slot, which is the
# assignment that keeps the kinetic pairing <u, Mu> exactly conserved by
# the inertial terms and reproduces the classical alpha-model energy.
PRESETS: dict[str, dict] = {
    "NSE-AC": dict(theta=1.0, theta1=0.0, theta2=0.0, chi=0, a0_family="fractional"),
    "Leray-AC-alpha": dict(theta=1.0, theta1=1.0, theta2=0.0, chi=0, a0_family="fractional"),
    "ML-AC-alpha": dict(theta=1.0, theta1=0.0, theta2=1.0, chi=0, a0_family="fractional"),
    "SBM-AC": dict(theta=1.0, theta1=1.0, theta2=1.0, chi=0, a0_family="fractional"),
    "NSV-AC": dict(theta=0.0, theta1=1.0, theta2=1.0, chi=0, a0_family="voight"),
    "NS-AC-alpha": dict(theta=1.0, theta1=1.0, theta2=0.0, chi=1, a0_family="fractional"),
    "NS-AC-alpha-like": dict(theta=None, theta1=None, theta2=0.0, chi=1, a0_family="fractional"),
}

PRESET_NAMES = tuple(PRESETS)


def canonical_preset_name(name: str) -> str:
    if name in PRESETS:
        return name
    raise ValueError(f"unknown preset {name!r}; choose one of {', '.join(PRESETS)}")


def preset(
    name: str,
    alpha: float = 0.2,
    nu: float = 1.0,
    epsilon: float = 0.1,
    gamma3: float = 1.0,
    user_theta: float | None = None,
    user_theta2: float | None = None,
    **extra,
) -> ModelParams:
    """Instantiate a named member of the family.

    ``NS-AC-alpha-like`` takes its dissipation exponent and the smoothing
    exponent of the advecting filter from ``user_theta``/``user_theta2``;
    the other presets reject those arguments.
    """
    name = canonical_preset_name(name)
    row = dict(PRESETS[name])
    if name == "NS-AC-alpha-like":
        if user_theta is None or user_theta2 is None:
            raise ValueError("NS-AC-alpha-like requires user_theta and user_theta2")
        row["theta"] = float(user_theta)
        row["theta1"] = float(user_theta2)
    elif user_theta is not None or user_theta2 is not None:
        raise ValueError(f"preset {name} does not take free exponents")
    return ModelParams(
        alpha=alpha, nu=nu, epsilon=epsilon, gamma3=gamma3, **row, **extra
    )


def fluid_only(p: ModelParams) -> ModelParams:
    """Same fluid operators with the order parameter disabled."""
    return replace(p, order_param="none")


def a0_symbol(p: ModelParams) -> Symbol:
    """Dissipation multiplier: nu*s^theta, or nu*s/(1+alpha^2 s) for Voigt."""
    if p.a0_family == "voight":
        nu, a2 = p.nu, p.alpha**2
        return lambda s: nu * s / (1.0 + a2 * s)
    nu, th = p.nu, p.theta
    if th == 0.0:
        return lambda s: nu * np.ones_like(np.asarray(s, dtype=float))
    if th == 1.0:
        return lambda s: nu * np.asarray(s, dtype=float)
    return lambda s: nu * np.asarray(s, dtype=float) ** th


def _helmholtz_symbol(alpha: float, exponent: float) -> Symbol:
    a2 = alpha**2
    if exponent == 0.0:
        return lambda s: np.ones_like(np.asarray(s, dtype=float))
    if exponent == 1.0:
        return lambda s: 1.0 / (1.0 + a2 * s)
    return lambda s: (1.0 + a2 * s) ** (-exponent)


def m_symbol(p: ModelParams) -> Symbol:
    """Advecting-velocity filter (1+alpha^2 s)^(-theta1)."""
    return _helmholtz_symbol(p.alpha, p.theta1)


def n_symbol(p: ModelParams) -> Symbol:
    """Advected-velocity filter (1+alpha^2 s)^(-theta2)."""
    return _helmholtz_symbol(p.alpha, p.theta2)


def energy_pairing_symbol(p: ModelParams) -> Symbol:
    """Weight E of the kinetic pairing <u, Eu>.

    E = N when chi = 0 and E = M when chi = 1: those are the slots in
    which the inertial trilinear form vanishes identically, so <u, Eu>
    is the quantity the advection terms neither create nor destroy.
    """
    return m_symbol(p) if p.chi == 1 else n_symbol(p)


def potential_F(p: ModelParams, r: np.ndarray | float) -> np.ndarray | float:
    """Double well gamma3*(r^2-1)^2; for vector fields r stacks components."""
    if p.order_param == "vector" and np.ndim(r) >= 1:
        rsq = np.sum(np.square(r), axis=0)
    else:
        rsq = np.square(r)
    return p.gamma3 * (rsq - 1.0) ** 2


def potential_f(p: ModelParams, r: np.ndarray | float) -> np.ndarray | float:
    """Well derivative 4*gamma3*r*(r^2-1); gradient in the vector case."""
    if p.order_param == "vector" and np.ndim(r) >= 1:
        rsq = np.sum(np.square(r), axis=0)
        return 4.0 * p.gamma3 * (rsq - 1.0) * np.asarray(r)
    return 4.0 * p.gamma3 * np.asarray(r) * (np.square(r) - 1.0)


def potential_fprime(p: ModelParams, r: np.ndarray | float) -> np.ndarray | float:
    """Second derivative 4*gamma3*(3r^2-1).

    For the vector well this is the largest Hessian eigenvalue at radius
    |d| = r, which is what the stabilization bound needs.
    """
    return 4.0 * p.gamma3 * (3.0 * np.square(r) - 1.0)


def stabilization_bound(p: ModelParams, r_max: float = 1.2) -> float:
    """Curvature bound sup|f'| on [-r_max, r_max], used for the shift."""
    return float(potential_fprime(p, r_max))
