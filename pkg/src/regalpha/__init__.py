"""Pseudo-spectral simulator for regularized two-phase flow models on the torus."""

from .config import ConfigError, RunConfig, load_config, parse_config
from .diagnostics import (
    DiagRecord,
    chemical_potential,
    decay_rate_fit,
    energy,
    energy_law_residual,
    max_principle_slack,
    stationarity_residual,
)
from .models import (
    PRESET_NAMES,
    ModelParams,
    a0_symbol,
    energy_pairing_symbol,
    m_symbol,
    n_symbol,
    potential_F,
    potential_f,
    potential_fprime,
    preset,
)
from .nonlinear import (
    NonlinearWorkspace,
    b0,
    b0_bar,
    b1,
    korteweg_convective_form,
    korteweg_stress_form,
    trilinear_form,
)
from .snapshots import SnapshotError, snapshot_read, snapshot_write
from .spectral import (
    Grid,
    apply_symbol,
    dealias,
    divergence,
    forward_transform,
    gradient,
    inverse_transform,
    laplacian,
    leray_project,
    make_grid,
    sobolev_norm,
)
from .stepper import (
    BlowUpError,
    ForcingSpec,
    State,
    StepperConfig,
    cfl_suggest,
    run,
    step,
    zero_state,
)

__version__ = "0.1.0"
