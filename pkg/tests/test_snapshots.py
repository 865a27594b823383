import struct

import numpy as np
import pytest

from regalpha.models import preset
from regalpha.snapshots import (
    MAGIC,
    SnapshotError,
    snapshot_read,
    snapshot_write,
    state_samples,
)
from regalpha.spectral import sobolev_norm
from regalpha.stepper import zero_state

from conftest import random_scalar, random_velocity


def make_state(grid, kind="scalar", t=1.25):
    p = preset("NSE-AC", order_param=kind if kind != "vector" else "vector",
               el_components=2)
    st = zero_state(grid, p)
    st.t = t
    st.u = random_velocity(grid, 31, 0.7)
    if kind == "scalar":
        st.phi = random_scalar(grid, 32)
    elif kind == "vector":
        st.phi = np.stack([random_scalar(grid, 33), random_scalar(grid, 34)])
    return st


class TestRoundTrip:
    @pytest.mark.parametrize("kind,count", [
        ("none", 2), ("scalar", 3), ("vector", 4),
    ])
    def test_payload_is_bit_exact(self, tmp_path, grid16, kind, count):
        st = make_state(grid16, kind)
        path = tmp_path / "state.rgac"
        snapshot_write(path, st)
        raw = path.read_bytes()
        header = struct.unpack_from("<4sIIId", raw)
        assert header[:4] == (MAGIC, 1, 16, count)
        assert header[4] == st.t
        payload = np.frombuffer(raw, dtype="<f8", offset=24)
        assert payload.tobytes() == state_samples(st).astype("<f8").tobytes()
        assert len(raw) == 24 + count * 16 * 16 * 8

    @pytest.mark.parametrize("kind", ["none", "scalar", "vector"])
    def test_spectral_reconstruction(self, tmp_path, grid16, kind):
        st = make_state(grid16, kind)
        path = tmp_path / "state.rgac"
        snapshot_write(path, st)
        back = snapshot_read(path)
        assert back.t == st.t
        assert back.grid.n == 16
        assert sobolev_norm(back.u - st.u, 0.0, grid16) <= 1e-12
        if kind == "none":
            assert back.phi is None
        else:
            assert back.phi.shape == st.phi.shape
            assert sobolev_norm(back.phi - st.phi, 0.0, grid16) <= 1e-12

    def test_rewrite_is_deterministic(self, tmp_path, grid16):
        st = make_state(grid16)
        p1, p2 = tmp_path / "a.rgac", tmp_path / "b.rgac"
        snapshot_write(p1, st)
        snapshot_write(p2, st)
        assert p1.read_bytes() == p2.read_bytes()


class TestErrors:
    def test_bad_magic(self, tmp_path, grid16):
        path = tmp_path / "s.rgac"
        snapshot_write(path, make_state(grid16))
        raw = bytearray(path.read_bytes())
        raw[:4] = b"NOPE"
        path.write_bytes(bytes(raw))
        with pytest.raises(SnapshotError, match="magic"):
            snapshot_read(path)

    def test_bad_version(self, tmp_path, grid16):
        path = tmp_path / "s.rgac"
        snapshot_write(path, make_state(grid16))
        raw = bytearray(path.read_bytes())
        raw[4:8] = struct.pack("<I", 9)
        path.write_bytes(bytes(raw))
        with pytest.raises(SnapshotError, match="version"):
            snapshot_read(path)

    def test_truncated_payload(self, tmp_path, grid16):
        path = tmp_path / "s.rgac"
        snapshot_write(path, make_state(grid16))
        raw = path.read_bytes()
        path.write_bytes(raw[:-16])
        with pytest.raises(SnapshotError, match="bytes"):
            snapshot_read(path)

    def test_grid_mismatch_names_both(self, tmp_path, grid16):
        path = tmp_path / "s.rgac"
        snapshot_write(path, make_state(grid16))
        with pytest.raises(SnapshotError, match="n=16.*n=32"):
            snapshot_read(path, expected_n=32)

    def test_non_finite_state_rejected(self, tmp_path, grid16):
        st = make_state(grid16)
        st.u[0, 3, 3] = np.nan
        with pytest.raises(SnapshotError, match="non-finite"):
            snapshot_write(tmp_path / "s.rgac", st)
