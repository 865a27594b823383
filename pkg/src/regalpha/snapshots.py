"""Binary state snapshots.

Layout (little-endian): magic ``RGAC``, version u32, grid size u32,
component count u32, time f64, then ``count`` blocks of n*n f64
real-space samples in row-major order.  Components are the two velocity
parts followed by the order-parameter fields, so the count encodes the
state kind: 2 fluid-only, 3 scalar, 4 or 5 vector.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .spectral import forward_transform, inverse_transform, make_grid
from .stepper import State

MAGIC = b"RGAC"
VERSION = 1
_HEADER = struct.Struct("<4sIIId")


class SnapshotError(ValueError):
    pass


def state_samples(state: State) -> np.ndarray:
    """Real-space component stack (count, n, n) of a state."""
    parts = [inverse_transform(state.u, state.grid)]
    if state.phi is not None:
        phi = state.phi if state.phi.ndim == 3 else state.phi[None]
        parts.append(inverse_transform(phi, state.grid))
    return np.concatenate(parts, axis=0)


def snapshot_write(path: str | Path, state: State) -> None:
    samples = state_samples(state)
    if not np.all(np.isfinite(samples)):
        raise SnapshotError("refusing to write a non-finite state")
    count = samples.shape[0]
    header = _HEADER.pack(MAGIC, VERSION, state.grid.n, count, state.t)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(samples, dtype="<f8").tobytes())


def snapshot_read(path: str | Path, expected_n: int | None = None) -> State:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise SnapshotError(f"{path}: truncated header")
    magic, version, n, count, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotError(f"{path}: unsupported version {version}")
    if expected_n is not None and n != expected_n:
        raise SnapshotError(
            f"{path}: snapshot grid n={n} does not match configured n={expected_n}"
        )
    if count < 2 or count > 5:
        raise SnapshotError(f"{path}: unsupported component count {count}")
    expected = _HEADER.size + count * n * n * 8
    if len(raw) != expected:
        raise SnapshotError(
            f"{path}: payload is {len(raw)} bytes, expected {expected}"
        )
    samples = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    samples = samples.reshape(count, n, n).astype(np.float64)
    grid = make_grid(n)
    u = forward_transform(samples[:2], grid)
    phi = None
    if count == 3:
        phi = forward_transform(samples[2], grid)
    elif count > 3:
        phi = forward_transform(samples[2:], grid)
    return State(t=t, u=u, phi=phi, grid=grid)
