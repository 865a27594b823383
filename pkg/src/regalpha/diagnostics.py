"""Energy accounting, structural residuals and long-time rate fits.

The Lyapunov functional of a state is

    E = 1/2 <u, Eu> + eps/2 ||grad phi||^2 + (1/eps) int F(phi)

with E the kinetic pairing weight of the model (the vector order
parameter weighs its well with eps instead of 1/eps, matching its
evolution law).  Every run with zero force dissipates E; the defect of
the discrete balance

    dE/dt + <A0 u, Eu> + D_ac = <g, Eu>

is reported per step and shrinks linearly with the step size.  D_ac is
||mu||^2 for the scalar order parameter and eps*gamma*||A1 d + f(d)||^2
for the vector one.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .models import (
    ModelParams,
    a0_symbol,
    energy_pairing_symbol,
    potential_F,
    potential_f,
)
from .spectral import (
    Grid,
    dealias,
    forward_transform,
    inverse_transform,
    sobolev_norm,
)

if TYPE_CHECKING:  # pragma: no cover
    from .stepper import ForcingSpec, State, StepperConfig


CSV_HEADER = "t,energy,kinetic,dirichlet,potential,mu_norm,u_neg_norm,max_abs_phi,upsilon,energy_residual"


@dataclass
class DiagRecord:
    t: float
    energy: float
    kinetic: float
    dirichlet: float
    potential: float
    mu_norm: float
    u_neg_norm: float
    max_abs_phi: float
    upsilon: float
    energy_residual: float

    def csv_row(self) -> str:
        return ",".join(repr(float(getattr(self, f.name))) for f in fields(self))


def _pairing_weights(p: ModelParams, grid: Grid) -> np.ndarray:
    return energy_pairing_symbol(p)(grid.ksq)


def _weighted_quadratic(coeffs: np.ndarray, weights: np.ndarray) -> float:
    return float((2.0 * np.pi) ** 2 * np.sum(weights * np.abs(coeffs) ** 2))


def _phi_samples(phi: np.ndarray, grid: Grid) -> np.ndarray:
    return inverse_transform(dealias(phi, grid), grid)


def chemical_potential(p: ModelParams, phi: np.ndarray, grid: Grid,
                       include_well: bool = True) -> np.ndarray:
    """Coefficients of mu = -eps*lap(phi) + f(phi)/eps (scalar mode).

    In vector mode returns the relaxation field A1 d + f(d), the
    quantity the orientation equation drives to zero.
    """
    if p.order_param == "vector":
        mu = grid.ksq * phi
        scale = 1.0
    else:
        mu = p.epsilon * grid.ksq * phi
        scale = 1.0 / p.epsilon
    if include_well:
        phi_r = _phi_samples(phi, grid)
        mu = mu + scale * dealias(forward_transform(potential_f(p, phi_r), grid), grid)
    return mu


def energy_parts(p: ModelParams, state: "State",
                 include_well: bool = True) -> tuple[float, float, float]:
    """(kinetic, dirichlet, potential) pieces of the Lyapunov functional."""
    grid = state.grid
    kinetic = 0.5 * _weighted_quadratic(state.u, _pairing_weights(p, grid))
    if state.phi is None:
        return kinetic, 0.0, 0.0
    dirichlet = 0.5 * p.epsilon * _weighted_quadratic(state.phi, grid.ksq)
    if not include_well:
        return kinetic, dirichlet, 0.0
    phi_r = _phi_samples(state.phi, grid)
    well = float((2.0 * np.pi / grid.n) ** 2 * np.sum(potential_F(p, phi_r)))
    weight = p.epsilon if p.order_param == "vector" else 1.0 / p.epsilon
    return kinetic, dirichlet, weight * well


def energy(p: ModelParams, state: "State") -> float:
    return sum(energy_parts(p, state))


def ac_dissipation(p: ModelParams, state: "State",
                   include_well: bool = True) -> float:
    """Order-parameter dissipation rate entering the energy balance."""
    if state.phi is None:
        return 0.0
    mu = chemical_potential(p, state.phi, state.grid, include_well)
    rate = _weighted_quadratic(mu, 1.0)
    if p.order_param == "vector":
        rate *= p.epsilon * p.el_gamma
    return rate


def energy_law_residual(prev: "State", next_: "State", p: ModelParams,
                        cfg: "StepperConfig", forcing: "ForcingSpec") -> float:
    """Absolute defect of the discrete energy balance over one step.

    Dissipation is evaluated at the new state (the implicit side) and
    the forcing work at the old time, matching the stepper.  Under the
    linear-only test hook the balance of the reduced system is used.
    """
    grid = next_.grid
    with_well = not cfg.linear_only
    de = (sum(energy_parts(p, next_, with_well))
          - sum(energy_parts(p, prev, with_well))) / cfg.dt
    ew = _pairing_weights(p, grid)
    visc = float((2.0 * np.pi) ** 2
                 * np.sum(a0_symbol(p)(grid.ksq) * ew * np.abs(next_.u) ** 2))
    work = 0.0
    g = forcing.at(prev.t)
    if g is not None:
        work = float((2.0 * np.pi) ** 2
                     * np.sum(np.real(g * np.conj(ew * next_.u))))
    return abs(de + visc + ac_dissipation(p, next_, with_well) - work)


def stationarity_residual(p: ModelParams, state: "State") -> float:
    """Distance from the steady set: ||u||_{theta-theta2} + ||lap-free well residual||.

    The order-parameter part is the L2 norm of -lap(phi) + f(phi), the
    equation every equilibrium satisfies with u = 0.
    """
    res = sobolev_norm(state.u, p.theta - p.theta2, state.grid)
    if state.phi is not None:
        grid = state.grid
        phi_r = _phi_samples(state.phi, grid)
        w = grid.ksq * dealias(state.phi, grid) \
            + forward_transform(potential_f(p, phi_r), grid)
        res += sobolev_norm(w, 0.0, grid)
    return res


def max_principle_slack(state: "State") -> float:
    """max_x |phi| - 1; nonpositive while the phase stays in its range."""
    if state.phi is None:
        return 0.0
    grid = state.grid
    phi_r = inverse_transform(state.phi, grid)
    if phi_r.ndim == 3:
        mag = np.sqrt(np.sum(phi_r**2, axis=0))
    else:
        mag = np.abs(phi_r)
    return float(np.max(mag)) - 1.0


def sample(prev: "State", next_: "State", p: ModelParams,
           cfg: "StepperConfig", forcing: "ForcingSpec") -> DiagRecord:
    """Full diagnostic record for the step prev -> next_."""
    grid = next_.grid
    kinetic, dirichlet, potential = energy_parts(p, next_)
    mu_norm = 0.0
    if next_.phi is not None:
        mu_norm = sobolev_norm(chemical_potential(p, next_.phi, grid), 0.0, grid)
    return DiagRecord(
        t=next_.t,
        energy=kinetic + dirichlet + potential,
        kinetic=kinetic,
        dirichlet=dirichlet,
        potential=potential,
        mu_norm=mu_norm,
        u_neg_norm=sobolev_norm(next_.u, -p.theta2, grid),
        max_abs_phi=max_principle_slack(next_) + 1.0 if next_.phi is not None else 0.0,
        upsilon=stationarity_residual(p, next_),
        energy_residual=energy_law_residual(prev, next_, p, cfg, forcing),
    )


def decay_rate_fit(ts: Sequence[float], values: Sequence[float]) -> float:
    """Algebraic decay exponent xi from value ~ (1+t)^(-xi).

    Least-squares slope of log(value) against log(1+t) over the trailing
    half of the series, negated.  Exponential decay yields a growing
    (window-dependent) estimate, which is reported as is.
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if ts.shape != values.shape or ts.ndim != 1:
        raise ValueError("series must be two equal-length 1-D sequences")
    if len(ts) < 10:
        raise ValueError(f"need at least 10 samples for a rate fit, got {len(ts)}")
    if np.any(values <= 0.0):
        raise ValueError("rate fit requires strictly positive values")
    half = len(ts) // 2
    x = np.log1p(ts[half:])
    y = np.log(values[half:])
    if np.allclose(x, x[0]):
        raise ValueError("degenerate time window")
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)
