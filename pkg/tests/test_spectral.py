import numpy as np
import pytest

from regalpha.spectral import (
    apply_symbol,
    dealias,
    divergence,
    forward_transform,
    gradient,
    hermitian_defect,
    inverse_transform,
    laplacian,
    leray_project,
    make_grid,
    quad,
    sobolev_norm,
)

from conftest import random_velocity, taylor_green


class TestMakeGrid:
    def test_small_grid_counts(self):
        g = make_grid(8)
        assert g.k1.size == 64
        # 8/3 = 2.67: modes with |k_i| <= 2 survive
        inside = (np.abs(g.k1) <= 2) & (np.abs(g.k2) <= 2)
        assert np.array_equal(g.dealias_mask, inside)

    def test_mask_for_n64(self):
        g = make_grid(64)
        assert g.dealias_mask[21, 0] and g.dealias_mask[0, 21]
        assert not g.dealias_mask[22, 0]

    @pytest.mark.parametrize("bad", [7, 9, 6, 4, 0, -8])
    def test_rejects_bad_sizes(self, bad):
        with pytest.raises(ValueError):
            make_grid(bad)

    def test_mask_symmetric_under_reflection(self, grid32):
        m = grid32.dealias_mask
        flipped = np.roll(m[::-1, ::-1], shift=(1, 1), axis=(0, 1))
        assert np.array_equal(m, flipped)


class TestTransforms:
    def test_constant_field(self, grid16):
        fh = forward_transform(np.full((16, 16), 3.0), grid16)
        assert fh[0, 0] == pytest.approx(3.0)
        fh[0, 0] = 0.0
        assert np.max(np.abs(fh)) < 1e-15

    def test_cosine_modes(self, grid16):
        fh = forward_transform(np.cos(grid16.x1), grid16)
        assert fh[1, 0] == pytest.approx(0.5)
        assert fh[-1, 0] == pytest.approx(0.5)

    @pytest.mark.parametrize("n", [16, 32, 64])
    def test_round_trip(self, n):
        g = make_grid(n)
        rng = np.random.default_rng(n)
        f = rng.standard_normal((n, n))
        back = inverse_transform(forward_transform(f, g), g)
        assert np.max(np.abs(back - f)) <= 1e-12 * np.max(np.abs(f))

    def test_shape_mismatch(self, grid16):
        with pytest.raises(ValueError):
            forward_transform(np.zeros((8, 8)), grid16)
        with pytest.raises(ValueError):
            inverse_transform(np.zeros((8, 8), dtype=complex), grid16)

    def test_real_field_gives_hermitian_coefficients(self, grid32):
        rng = np.random.default_rng(5)
        fh = forward_transform(rng.standard_normal((32, 32)), grid32)
        assert hermitian_defect(fh, grid32) < 1e-14


class TestApplySymbol:
    def test_minus_laplacian_on_unit_mode(self, grid16):
        fh = forward_transform(np.cos(grid16.x1), grid16)
        out = apply_symbol(fh, lambda s: s, grid16)
        assert np.allclose(out, fh)

    def test_helmholtz_inverse_halves_unit_mode(self, grid16):
        fh = np.zeros((16, 16), dtype=complex)
        fh[1, 0] = 1.0
        out = apply_symbol(fh, lambda s: 1.0 / (1.0 + s), grid16)
        assert out[1, 0] == pytest.approx(0.5)

    def test_zero_exponent_is_identity(self, grid16):
        rng = np.random.default_rng(0)
        fh = forward_transform(rng.standard_normal((16, 16)), grid16)
        out = apply_symbol(fh, lambda s: s**0.0, grid16)
        assert np.array_equal(out, fh)

    def test_composition_is_multiplicative(self, grid32):
        rng = np.random.default_rng(1)
        fh = forward_transform(rng.standard_normal((32, 32)), grid32)
        a = lambda s: 1.0 / (1.0 + 0.04 * s)
        b = lambda s: (1.0 + s) ** 0.3
        once = apply_symbol(apply_symbol(fh, a, grid32), b, grid32)
        joint = apply_symbol(fh, lambda s: a(s) * b(s), grid32)
        assert np.max(np.abs(once - joint)) < 1e-14 * np.max(np.abs(fh))


class TestCalculus:
    def test_gradient_of_cosine(self, grid16):
        fh = forward_transform(np.cos(grid16.x1), grid16)
        g1, g2 = inverse_transform(gradient(fh, grid16), grid16)
        assert np.allclose(g1, -np.sin(grid16.x1), atol=1e-13)
        assert np.max(np.abs(g2)) < 1e-13

    def test_div_grad_equals_laplacian(self, grid16):
        rng = np.random.default_rng(2)
        fh = forward_transform(rng.standard_normal((16, 16)), grid16)
        composed = divergence(gradient(fh, grid16), grid16)
        direct = laplacian(fh, grid16)
        # the composition zeroes Nyquist twice, the direct route never does
        band = dealias(np.ones_like(fh), grid16)
        assert np.max(np.abs((composed - direct) * band)) <= 1e-12

    def test_laplacian_of_two_cosines(self, grid16):
        f = np.cos(grid16.x1) + np.cos(grid16.x2)
        out = inverse_transform(laplacian(forward_transform(f, grid16), grid16), grid16)
        assert np.allclose(out, -f, atol=1e-13)


class TestLeray:
    def test_annihilates_gradients(self, grid16):
        pot = forward_transform(np.cos(grid16.x1) * np.cos(grid16.x2), grid16)
        out = leray_project(gradient(pot, grid16), grid16)
        assert np.max(np.abs(out)) < 1e-14

    def test_taylor_green_unchanged(self, grid16):
        tg = taylor_green(grid16)
        assert np.max(np.abs(leray_project(tg, grid16) - tg)) < 1e-14

    def test_idempotent(self, grid32):
        rng = np.random.default_rng(3)
        v = forward_transform(rng.standard_normal((2, 32, 32)), grid32)
        once = leray_project(v, grid32)
        twice = leray_project(once, grid32)
        assert np.max(np.abs(twice - once)) <= 1e-13

    def test_divergence_free_invariant(self, grid32):
        rng = np.random.default_rng(4)
        v = forward_transform(rng.standard_normal((2, 32, 32)), grid32)
        out = leray_project(v, grid32)
        kdot = grid32.k1 * out[0] + grid32.k2 * out[1]
        assert np.max(np.abs(kdot)) <= 1e-12 * np.max(np.abs(out))
        assert out[0, 0, 0] == 0 and out[1, 0, 0] == 0


class TestNorms:
    def test_cosine_l2(self, grid16):
        fh = forward_transform(np.cos(grid16.x1), grid16)
        assert sobolev_norm(fh, 0.0, grid16) == pytest.approx(np.pi * np.sqrt(2.0))

    def test_cosine_h1(self, grid16):
        fh = forward_transform(np.cos(grid16.x1), grid16)
        assert sobolev_norm(fh, 1.0, grid16) == pytest.approx(2.0 * np.pi)

    def test_zero_field(self, grid16):
        z = np.zeros((16, 16), dtype=complex)
        for s in (-1.5, 0.0, 2.0):
            assert sobolev_norm(z, s, grid16) == 0.0

    def test_l2_matches_real_space_quadrature(self, grid32):
        rng = np.random.default_rng(6)
        f = rng.standard_normal((32, 32))
        direct = np.sqrt(quad(f**2, grid32))
        spectral = sobolev_norm(forward_transform(f, grid32), 0.0, grid32)
        assert abs(spectral - direct) <= 1e-10 * direct

    def test_negative_order_finite_for_mean_free(self, grid16):
        v = random_velocity(grid16, 8)
        assert np.isfinite(sobolev_norm(v, -1.0, grid16))


class TestDealias:
    def test_low_band_untouched(self, grid32):
        fh = np.zeros((32, 32), dtype=complex)
        fh[5, 3] = 1.0  # |k_i| <= 32/4
        fh[-5, -3] = 1.0
        assert np.array_equal(dealias(fh, grid32), fh)

    def test_near_nyquist_mode_zeroed(self, grid16):
        fh = np.zeros((16, 16), dtype=complex)
        fh[7, 0] = 1.0  # k = n/2 - 1 = 7 >= 16/3
        assert np.max(np.abs(dealias(fh, grid16))) == 0.0

    def test_projection(self, grid32):
        rng = np.random.default_rng(7)
        fh = forward_transform(rng.standard_normal((32, 32)), grid32)
        once = dealias(fh, grid32)
        assert np.array_equal(dealias(once, grid32), once)
