"""Fourier discretization of the 2-D periodic torus [0, 2pi)^2.

Fields are stored as complex coefficient arrays following the convention

    f(x) = sum_k f_hat[k] * exp(i k.x),

so ``f_hat = fft2(samples) / n**2``.  Scalars have shape ``(n, n)``;
vector fields stack components along a leading axis, e.g. ``(2, n, n)``
for velocities.  All operators act diagonally in coefficient space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# Multiplier on |k|^2, vectorized over arrays.
Symbol = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Grid:
    """Uniform n x n lattice with its wavenumber tables and 2/3 dealias mask."""

    n: int
    length: float = 2.0 * np.pi
    k1: np.ndarray = field(repr=False, default=None)
    k2: np.ndarray = field(repr=False, default=None)
    ksq: np.ndarray = field(repr=False, default=None)
    ik1: np.ndarray = field(repr=False, default=None)
    ik2: np.ndarray = field(repr=False, default=None)
    dealias_mask: np.ndarray = field(repr=False, default=None)
    nyquist_free: np.ndarray = field(repr=False, default=None)
    x1: np.ndarray = field(repr=False, default=None)
    x2: np.ndarray = field(repr=False, default=None)

    @property
    def dx(self) -> float:
        return self.length / self.n


def make_grid(n: int) -> Grid:
    """Build the lattice for ``n`` modes per dimension (even, >= 8)."""
    if n % 2 != 0 or n < 8:
        raise ValueError(f"grid size must be an even integer >= 8, got {n}")
    k = np.fft.fftfreq(n, d=1.0 / n)  # 0, 1, ..., n/2-1, -n/2, ..., -1
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    ksq = k1 * k1 + k2 * k2
    # Differentiation multipliers; the unpaired Nyquist mode is zeroed so
    # derivatives of real fields stay real-valued.
    dk = k.copy()
    dk[n // 2] = 0.0
    dk1, dk2 = np.meshgrid(dk, dk, indexing="ij")
    cutoff = n / 3.0
    mask = (np.abs(k1) < cutoff) & (np.abs(k2) < cutoff)
    nyq_free = (np.abs(k1) < n // 2) & (np.abs(k2) < n // 2)
    x = np.arange(n) * (2.0 * np.pi / n)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    return Grid(
        n=n,
        k1=k1,
        k2=k2,
        ksq=ksq,
        ik1=1j * dk1,
        ik2=1j * dk2,
        dealias_mask=mask,
        nyquist_free=nyq_free,
        x1=x1,
        x2=x2,
    )


def forward_transform(samples: np.ndarray, grid: Grid) -> np.ndarray:
    """Real-space samples -> coefficients (any number of leading axes)."""
    if samples.shape[-2:] != (grid.n, grid.n):
        raise ValueError(
            f"sample array shape {samples.shape[-2:]} does not match grid n={grid.n}"
        )
    return np.fft.fft2(samples) / grid.n**2


def inverse_transform(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Coefficients -> real-space samples, discarding the imaginary residue."""
    if coeffs.shape[-2:] != (grid.n, grid.n):
        raise ValueError(
            f"coefficient array shape {coeffs.shape[-2:]} does not match grid n={grid.n}"
        )
    return np.real(np.fft.ifft2(coeffs)) * grid.n**2


def apply_symbol(coeffs: np.ndarray, sym: Symbol, grid: Grid) -> np.ndarray:
    """Multiply every coefficient by ``sym(|k|^2)``."""
    return coeffs * sym(grid.ksq)


def gradient(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Spectral gradient of a scalar; returns shape ``(2, n, n)``."""
    return np.stack((grid.ik1 * coeffs, grid.ik2 * coeffs))


def divergence(vec: np.ndarray, grid: Grid) -> np.ndarray:
    """Spectral divergence of a two-component field."""
    return grid.ik1 * vec[0] + grid.ik2 * vec[1]


def laplacian(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Spectral Laplacian (multiplier -|k|^2), broadcasting over leading axes."""
    return -grid.ksq * coeffs


def leray_project(vec: np.ndarray, grid: Grid) -> np.ndarray:
    """Project onto divergence-free, mean-free fields: u - k (k.u)/|k|^2.

    The unpaired Nyquist rows are zeroed: they cannot be differentiated
    symmetrically, so no consistent solenoidal content lives there.
    """
    ksq = np.where(grid.ksq == 0.0, 1.0, grid.ksq)
    kdotu = (grid.k1 * vec[0] + grid.k2 * vec[1]) / ksq
    out = np.stack((vec[0] - grid.k1 * kdotu, vec[1] - grid.k2 * kdotu))
    out *= grid.nyquist_free
    out[:, 0, 0] = 0.0
    return out


def dealias(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Zero every coefficient outside the 2/3 band."""
    return coeffs * grid.dealias_mask


def sobolev_norm(coeffs: np.ndarray, s: float, grid: Grid) -> float:
    """H^s norm with weights (1+|k|^2)^s; components are summed for vectors."""
    w = (1.0 + grid.ksq) ** s
    total = np.sum(w * np.abs(coeffs) ** 2)
    return float(np.sqrt((2.0 * np.pi) ** 2 * total))


def l2_inner(a: np.ndarray, b: np.ndarray, grid: Grid) -> float:
    """L^2 inner product of two (possibly multi-component) real fields."""
    return float((2.0 * np.pi) ** 2 * np.sum(np.real(a * np.conj(b))))


def quad(samples: np.ndarray, grid: Grid) -> float:
    """Trapezoid-free periodic quadrature (2pi/n)^2 * sum(samples)."""
    return float((2.0 * np.pi / grid.n) ** 2 * np.sum(samples))


def divergence_max(vec: np.ndarray, grid: Grid) -> float:
    """Largest |k.u_k| over the lattice; zero for solenoidal fields."""
    return float(np.max(np.abs(grid.k1 * vec[0] + grid.k2 * vec[1])))


def hermitian_defect(coeffs: np.ndarray, grid: Grid) -> float:
    """Deviation from f_hat(-k) == conj(f_hat(k)); zero for real fields."""
    flipped = np.conj(np.roll(coeffs[..., ::-1, ::-1], shift=(1, 1), axis=(-2, -1)))
    return float(np.max(np.abs(coeffs - flipped)))
