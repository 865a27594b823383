"""Figure rendering for the report path.

Figures are written next to the delimited outputs; the CSVs remain the
machine-readable contract.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spectral import inverse_transform
from .stepper import State


def plot_diagnostics(records, path: str | Path) -> None:
    ts = [r.t for r in records]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6.5), constrained_layout=True)

    ax = axes[0, 0]
    ax.plot(ts, [r.energy for r in records], label="total", lw=1.6)
    ax.plot(ts, [r.kinetic for r in records], label="kinetic", lw=1.0)
    ax.plot(ts, [r.dirichlet for r in records], label="dirichlet", lw=1.0)
    ax.plot(ts, [r.potential for r in records], label="potential", lw=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax.legend(fontsize=8)

    ax = axes[0, 1]
    ax.semilogy(ts, _floor([r.mu_norm for r in records]), label="|mu|")
    ax.semilogy(ts, _floor([r.u_neg_norm for r in records]), label="|u| (dual)")
    ax.semilogy(ts, _floor([r.upsilon for r in records]), label="stationarity")
    ax.set_xlabel("t")
    ax.legend(fontsize=8)

    ax = axes[1, 0]
    ax.plot(ts, [r.max_abs_phi for r in records])
    ax.axhline(1.0, color="k", ls="--", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("max |phi|")

    ax = axes[1, 1]
    ax.semilogy(ts, _floor([r.energy_residual for r in records]))
    ax.set_xlabel("t")
    ax.set_ylabel("energy-law defect")

    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_fields(state: State, path: str | Path) -> None:
    grid = state.grid
    vort = inverse_transform(
        grid.ik1 * state.u[1] - grid.ik2 * state.u[0], grid)
    panels = [("vorticity", vort, "RdBu_r")]
    if state.phi is not None:
        if state.phi.ndim == 3:
            mag = np.sqrt(np.sum(inverse_transform(state.phi, grid) ** 2, axis=0))
            panels.append(("|d|", mag, "viridis"))
        else:
            panels.append(("phi", inverse_transform(state.phi, grid), "RdBu_r"))
    fig, axes = plt.subplots(1, len(panels), figsize=(4.5 * len(panels), 4),
                             constrained_layout=True)
    if len(panels) == 1:
        axes = [axes]
    for ax, (title, data, cmap) in zip(axes, panels):
        im = ax.imshow(data.T, origin="lower", cmap=cmap,
                       extent=[0, 2 * np.pi, 0, 2 * np.pi])
        ax.set_title(f"{title}, t = {state.t:.3g}")
        fig.colorbar(im, ax=ax, shrink=0.85)
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_sweep(rows: list[dict], xkey: str, path: str | Path) -> None:
    ok = [r for r in rows if r["status"] == "ok"]
    if not ok:
        return
    xs = [r[xkey] for r in ok]
    fig, ax = plt.subplots(figsize=(5, 4), constrained_layout=True)
    ax.loglog(xs, _floor([r["u_err"] for r in ok]), "o-", label="u error (L2)")
    ax.loglog(xs, _floor([r["phi_err"] for r in ok]), "s-", label="phi error (H1)")
    ax.set_xlabel(xkey)
    ax.set_ylabel("error vs reference")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_decay(ts, values, xi: float, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4), constrained_layout=True)
    ax.loglog(1.0 + np.asarray(ts), values, lw=1.2, label="trajectory distance")
    if xi > 0:
        t_ref = 1.0 + np.asarray(ts[len(ts) // 2:])
        anchor = values[len(ts) // 2] * (t_ref / t_ref[0]) ** (-xi)
        ax.loglog(t_ref, anchor, "k--", lw=0.9, label=f"slope -{xi:.3g}")
    ax.set_xlabel("1 + t")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=130)
    plt.close(fig)


def _floor(values, eps: float = 1e-300):
    return [max(v, eps) for v in values]
