"""Experiment orchestration: single runs, limit studies, equilibrium runs.

Every command takes a RunConfig, writes its delimited outputs (and
figures) under ``outdir`` and returns a process exit code: 0 on
success, 2 on numerical blow-up.  I/O failures are left to the caller.
Identical configurations produce byte-identical CSVs and snapshots.
"""

from __future__ import annotations

import os
from dataclasses import replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import diagnostics, plots
from .config import ConfigError, RunConfig
from .models import ModelParams, canonical_preset_name, preset
from .snapshots import snapshot_read, snapshot_write
from .spectral import (
    Grid,
    dealias,
    forward_transform,
    inverse_transform,
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
    zero_state,
)

_FORCING_SEED_OFFSET = 7919  # decouple the force profile from the initial data


def random_divfree_velocity(grid: Grid, seed: int, amplitude: float,
                            kmin: float = 1.0, kmax: float = 4.0) -> np.ndarray:
    """Seeded solenoidal field with spectrum confined to kmin <= |k| <= kmax,
    normalized to the requested L2 amplitude."""
    if amplitude == 0.0:
        return np.zeros((2, grid.n, grid.n), dtype=complex)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((2, grid.n, grid.n))
    coeffs = forward_transform(noise, grid)
    band = (grid.ksq >= kmin**2) & (grid.ksq <= kmax**2)
    coeffs = leray_project(coeffs * band, grid)
    norm = sobolev_norm(coeffs, 0.0, grid)
    if norm == 0.0:
        raise ValueError("empty wavenumber band for the velocity profile")
    return coeffs * (amplitude / norm)


def random_order_parameter(grid: Grid, seed: int, mean: float, max_abs: float,
                           components: int = 1,
                           kmin: float = 1.0, kmax: float = 4.0) -> np.ndarray:
    """Seeded band-limited order parameter with |phi| <= max_abs pointwise.

    The fluctuation is scaled into the headroom left by the mean, so the
    field starts inside the invariant range of the phase equation.
    """
    if abs(mean) > max_abs:
        raise ValueError(f"|mean| = {abs(mean)} exceeds the bound {max_abs}")
    rng = np.random.default_rng(seed)
    shape = (components, grid.n, grid.n) if components > 1 else (grid.n, grid.n)
    noise = rng.standard_normal(shape)
    coeffs = forward_transform(noise, grid)
    band = (grid.ksq >= kmin**2) & (grid.ksq <= kmax**2)
    samples = inverse_transform(coeffs * band, grid)
    if components > 1:
        mag = np.max(np.sqrt(np.sum(samples**2, axis=0)))
    else:
        mag = np.max(np.abs(samples))
    headroom = max_abs - abs(mean)
    if mag > 0 and headroom > 0:
        samples = samples * (headroom / mag)
    elif headroom <= 0:
        samples = np.zeros_like(samples)
    if components > 1:
        samples[0] += mean
    else:
        samples = samples + mean
    return dealias(forward_transform(samples, grid), grid)


def initial_state(cfg: RunConfig, grid: Grid, p: ModelParams) -> State:
    if cfg.ic_file is not None:
        return snapshot_read(cfg.ic_file, expected_n=grid.n)
    state = zero_state(grid, p)
    state.u = random_divfree_velocity(grid, cfg.seed, cfg.ic_amp_u)
    if p.order_param == "scalar":
        state.phi = random_order_parameter(
            grid, cfg.seed + 1, cfg.ic_phi_mean, cfg.ic_phi_max)
    elif p.order_param == "vector":
        state.phi = random_order_parameter(
            grid, cfg.seed + 1, cfg.ic_phi_mean, cfg.ic_phi_max,
            components=p.el_components)
    return state


def build_forcing(cfg: RunConfig, grid: Grid) -> ForcingSpec:
    if cfg.forcing_envelope == "zero" or cfg.forcing_amplitude == 0.0:
        return ForcingSpec()
    g0 = random_divfree_velocity(
        grid, cfg.seed + _FORCING_SEED_OFFSET, cfg.forcing_amplitude)
    return ForcingSpec(g0=g0, envelope=cfg.forcing_envelope, delta=cfg.forcing_delta)


def build_setup(cfg: RunConfig):
    """(grid, params, initial state, forcing, stepper config) for a RunConfig."""
    grid = make_grid(cfg.n)
    p = cfg.model_params()
    state0 = initial_state(cfg, grid, p)
    forcing = build_forcing(cfg, grid)
    dt = cfg.dt if cfg.dt is not None else cfl_suggest(state0, grid, p)
    step_cfg = StepperConfig(dt=dt, scheme=cfg.scheme, sigma_stab=cfg.sigma_stab)
    return grid, p, state0, forcing, step_cfg


def _open_csv(path: Path):
    fh = open(path, "w", encoding="utf-8", newline="\n")
    fh.write(diagnostics.CSV_HEADER + "\n")
    return fh


def cmd_run(cfg: RunConfig, outdir: Optional[str] = None) -> int:
    """Single simulation: diagnostics CSV, periodic snapshots, figures."""
    out = Path(outdir or cfg.outdir)
    os.makedirs(out, exist_ok=True)
    grid, p, state0, forcing, step_cfg = build_setup(cfg)
    t0 = state0.t
    records = []
    csv = _open_csv(out / "diagnostics.csv")

    def on_sample(state: State, rec: diagnostics.DiagRecord) -> None:
        records.append(rec)
        csv.write(rec.csv_row() + "\n")
        if cfg.snapshot_every:
            steps = int(round((state.t - t0) / step_cfg.dt))
            if steps % cfg.snapshot_every == 0:
                snapshot_write(out / f"snap_{steps:08d}.rgac", state)

    code = 0
    try:
        final, _ = run(state0, p, step_cfg, forcing, cfg.t_end,
                       cfg.sample_every, on_sample=on_sample)
        snapshot_write(out / "final.rgac", final)
    except BlowUpError as err:
        print(f"blow-up at t = {err.time:.6g}; partial diagnostics kept")
        code = 2
        final = None
    finally:
        csv.close()
    if cfg.plots and records:
        plots.plot_diagnostics(records, out / "diagnostics.png")
        if final is not None:
            plots.plot_fields(final, out / "fields.png")
    return code


def _member_config(cfg: RunConfig, **changes) -> RunConfig:
    member = replace(cfg)
    for key, value in changes.items():
        setattr(member, key, value)
    return member


def _final_state(cfg: RunConfig, outdir: Path):
    """Run one sweep member; returns (state or None, exit code)."""
    code = cmd_run(cfg, outdir=str(outdir))
    if code != 0:
        return None, code
    return snapshot_read(outdir / "final.rgac", expected_n=cfg.n), 0


def _state_errors(state: State, ref: State) -> tuple[float, float]:
    u_err = sobolev_norm(state.u - ref.u, 0.0, state.grid)
    phi_err = 0.0
    if state.phi is not None and ref.phi is not None:
        phi_err = sobolev_norm(state.phi - ref.phi, 1.0, state.grid)
    return u_err, phi_err


def cmd_sweep_alpha(cfg: RunConfig, alphas: Optional[list[float]] = None) -> tuple[int, list[dict]]:
    """Filter-length study: members against an unregularized reference.

    All members share the initial data, forcing realization, grid and
    step; only alpha varies, so the error columns isolate the filter.
    """
    alphas = list(alphas if alphas is not None else cfg.alphas)
    if len(alphas) < 3:
        raise ConfigError("sweep needs at least 3 alpha values")
    if any(b >= a for a, b in zip(alphas, alphas[1:])):
        raise ConfigError("alpha list must be strictly decreasing")
    member_preset = cfg.preset or "NS-AC-alpha"
    if canonical_preset_name(member_preset) == "NSE-AC":
        raise ConfigError("alpha sweep needs an alpha-dependent preset")
    out = Path(cfg.outdir)
    os.makedirs(out, exist_ok=True)

    ref_cfg = _member_config(cfg, preset="NSE-AC", plots=False)
    if ref_cfg.dt is None:
        grid, p0, s0, _, sc = build_setup(ref_cfg)
        ref_cfg.dt = sc.dt
    ref, code = _final_state(ref_cfg, out / "reference")
    if ref is None:
        return code, []

    rows: list[dict] = []
    worst = 0
    for a in alphas:
        mcfg = _member_config(cfg, preset=member_preset, alpha=a,
                              dt=ref_cfg.dt, plots=False)
        state, code = _final_state(mcfg, out / f"alpha_{a:g}")
        if state is None:
            rows.append(dict(alpha=a, u_err=float("nan"),
                             phi_err=float("nan"), status="blowup"))
            worst = 2
            continue
        u_err, phi_err = _state_errors(state, ref)
        rows.append(dict(alpha=a, u_err=u_err, phi_err=phi_err, status="ok"))

    with open(out / "sweep_alpha.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("alpha,u_err_l2,phi_err_h1,status\n")
        for r in rows:
            fh.write(f"{r['alpha']!r},{r['u_err']!r},{r['phi_err']!r},{r['status']}\n")
    if cfg.plots:
        plots.plot_sweep(rows, "alpha", out / "sweep_alpha.png")
    return worst, rows


_NU_SWEEP_PRESETS = ("SBM-AC", "Leray-AC-alpha", "NSV-AC")


def cmd_sweep_nu(cfg: RunConfig, nus: Optional[list[float]] = None) -> tuple[int, list[dict]]:
    """Vanishing-viscosity study against the inviscid member."""
    nus = list(nus if nus is not None else cfg.nus)
    if len(nus) < 2 or nus[-1] != 0.0:
        raise ConfigError("nu list must end at 0")
    if any(b >= a for a, b in zip(nus, nus[1:])):
        raise ConfigError("nu list must be strictly decreasing")
    if cfg.preset is None or canonical_preset_name(cfg.preset) not in _NU_SWEEP_PRESETS:
        raise ConfigError(
            f"nu sweep requires one of the presets {', '.join(_NU_SWEEP_PRESETS)}")
    out = Path(cfg.outdir)
    os.makedirs(out, exist_ok=True)

    inv_cfg = _member_config(cfg, nu=0.0, plots=False)
    if inv_cfg.dt is None:
        _, _, _, _, sc = build_setup(inv_cfg)
        inv_cfg.dt = sc.dt
    ref, code = _final_state(inv_cfg, out / "nu_0")
    if ref is None:
        return code, []

    rows: list[dict] = []
    worst = 0
    for v in nus[:-1]:
        mcfg = _member_config(cfg, nu=v, dt=inv_cfg.dt, plots=False)
        state, code = _final_state(mcfg, out / f"nu_{v:g}")
        if state is None:
            rows.append(dict(nu=v, u_err=float("nan"),
                             phi_err=float("nan"), status="blowup"))
            worst = 2
            continue
        u_err, phi_err = _state_errors(state, ref)
        rows.append(dict(nu=v, u_err=u_err, phi_err=phi_err, status="ok"))
    rows.append(dict(nu=0.0, u_err=0.0, phi_err=0.0, status="reference"))

    with open(out / "sweep_nu.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("nu,u_err_l2,phi_err_h1,status\n")
        for r in rows:
            fh.write(f"{r['nu']!r},{r['u_err']!r},{r['phi_err']!r},{r['status']}\n")
    if cfg.plots:
        plots.plot_sweep(rows[:-1], "nu", out / "sweep_nu.png")
    return worst, rows


def cmd_equilibrium(cfg: RunConfig) -> tuple[int, dict]:
    """Long-horizon relaxation run with a decay-rate fit.

    Fits the algebraic exponent of ||u||_{-theta2} + ||phi - phi_end||_H1
    against 1 + t, writes the final order parameter as the empirical
    equilibrium and reports the stationarity residual at the end.
    """
    out = Path(cfg.outdir)
    os.makedirs(out, exist_ok=True)
    grid, p, state0, forcing, step_cfg = build_setup(cfg)
    records: list[diagnostics.DiagRecord] = []
    phis: list[np.ndarray] = []
    csv = _open_csv(out / "diagnostics.csv")

    def on_sample(state: State, rec: diagnostics.DiagRecord) -> None:
        records.append(rec)
        csv.write(rec.csv_row() + "\n")
        if state.phi is not None:
            phis.append(state.phi.copy())

    try:
        final, _ = run(state0, p, step_cfg, forcing, cfg.t_end,
                       cfg.sample_every, on_sample=on_sample)
    except BlowUpError as err:
        csv.close()
        print(f"blow-up at t = {err.time:.6g}")
        return 2, {}
    csv.close()
    snapshot_write(out / "phi_star.rgac", final)

    ts = np.array([r.t for r in records])
    if final.phi is not None:
        dist = np.array([
            rec.u_neg_norm + sobolev_norm(phi - final.phi, 1.0, grid)
            for rec, phi in zip(records, phis)
        ])
    else:
        dist = np.array([rec.u_neg_norm for rec in records])

    # Samples that have collapsed onto the rounding floor carry no rate
    # information and would flatten the fit; drop them.
    keep = dist > max(float(dist.max()), 0.0) * 1e-12
    status = "ok"
    xi = 0.0
    if keep.sum() >= 10:
        try:
            xi = diagnostics.decay_rate_fit(ts[keep], dist[keep])
        except ValueError:
            status = "warning"
    else:
        status = "warning"
    if xi <= 0.0:
        status = "warning"

    summary = dict(
        status=status,
        xi=xi,
        final_upsilon=diagnostics.stationarity_residual(p, final),
        final_u_neg_norm=sobolev_norm(final.u, -p.theta2, grid),
        max_principle_slack=diagnostics.max_principle_slack(final),
        t_end=final.t,
    )
    with open(out / "equilibrium_summary.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("key,value\n")
        for key, value in summary.items():
            rendered = repr(value) if isinstance(value, float) else str(value)
            fh.write(f"{key},{rendered}\n")
    if cfg.plots and keep.sum() >= 2:
        plots.plot_decay(ts[keep], dist[keep], xi, out / "decay_fit.png")
    return 0, summary
