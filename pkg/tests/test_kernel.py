"""Green's kernel: closed form, quadrature application, defining-ODE check."""

import numpy as np
import pytest

from boundstates import (
    GreensKernel,
    GridMismatchError,
    PotentialSpec,
    SampledFunction,
    apply_kernel,
    kernel_value,
    make_grid,
    sample_potential,
)

# Identity used below: (-d^2/dx^2 + 1) sech = 2 sech^3, so convolving the
# unit-energy kernel with sech^2 * sech returns sech / 2.
PT_IDENTITY_TOL = 2e-4


class TestKernelValue:
    def test_coincident_full(self):
        assert kernel_value(GreensKernel(1.0), 0.3, 0.3) == pytest.approx(0.5)
        assert kernel_value(GreensKernel(4.0), 0.0, 0.0) == pytest.approx(0.25)

    def test_odd_vanishes_at_origin(self):
        k = GreensKernel(1.0, "odd")
        for xp in (-3.0, 0.2, 5.0):
            assert kernel_value(k, 0.0, xp) == pytest.approx(0.0, abs=1e-15)

    def test_odd_is_image_difference(self):
        full = GreensKernel(0.7)
        odd = GreensKernel(0.7, "odd")
        x, xp = 1.3, 2.1
        expected = kernel_value(full, x, xp) - kernel_value(full, x, -xp)
        assert kernel_value(odd, x, xp) == pytest.approx(expected, rel=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            GreensKernel(0.0)
        with pytest.raises(ValueError):
            GreensKernel(1.0, "even")


class TestApplyKernel:
    def test_zero_input(self, fine_grid, gaussian_fine):
        zero = SampledFunction(fine_grid, np.zeros(fine_grid.n_points))
        out = apply_kernel(GreensKernel(1.0), gaussian_fine, zero)
        np.testing.assert_array_equal(out.values, 0.0)

    def test_linearity(self, fine_grid, gaussian_fine):
        u = SampledFunction.from_callable(fine_grid, lambda x: np.exp(-x * x / 3.0))
        k = GreensKernel(0.8)
        w1 = apply_kernel(k, gaussian_fine, u).values
        w2 = apply_kernel(
            k, gaussian_fine, SampledFunction(fine_grid, 5.0 * u.values)
        ).values
        np.testing.assert_allclose(w2, 5.0 * w1, rtol=1e-12)

    def test_grid_mismatch(self, gaussian_fine):
        other = make_grid(12.0, 241)
        u = SampledFunction(other, np.ones(241))
        with pytest.raises(GridMismatchError):
            apply_kernel(GreensKernel(1.0), gaussian_fine, u)

    @pytest.mark.parametrize("sector", ["full", "odd"])
    def test_matches_dense_quadrature(self, sector, rng):
        # The prefix-sum application must agree with the explicitly assembled
        # kernel matrix to roundoff; the dense route is the brute-force oracle.
        g = make_grid(8.0, 201)
        V = sample_potential(PotentialSpec.gaussian(), g)
        u = SampledFunction(g, rng.normal(size=g.n_points))
        eps = 0.7
        s = np.sqrt(eps)
        w_scan = apply_kernel(GreensKernel(eps, sector), V, u).values

        def G(d):
            return np.exp(-s * np.abs(d)) / (2.0 * s)

        f = V.values * u.values
        x = g.points
        if sector == "full":
            wts = g.weights()
            dense = G(x[:, None] - x[None, :]) @ (wts * f)
        else:
            mid = g.mid_index
            xh = x[mid:]
            wts = np.full(xh.size, g.spacing)
            wts[0] = wts[-1] = 0.5 * g.spacing
            K = G(x[:, None] - xh[None, :]) - G(x[:, None] + xh[None, :])
            dense = K @ (wts * f[mid:])
        np.testing.assert_allclose(w_scan, dense, atol=1e-13)

    def test_poschl_teller_identity(self, fine_grid, poschl_teller_fine):
        sech = SampledFunction.from_callable(fine_grid, lambda x: 1.0 / np.cosh(x))
        out = apply_kernel(GreensKernel(1.0), poschl_teller_fine, sech)
        err = np.max(np.abs(out.values - 0.5 * sech.values))
        assert err < PT_IDENTITY_TOL

    def test_output_is_odd_for_any_input(self, fine_grid, gaussian_fine):
        u = SampledFunction.from_callable(fine_grid, lambda x: np.exp(-((x - 1) ** 2)))
        out = apply_kernel(GreensKernel(0.5, "odd"), gaussian_fine, u).values
        np.testing.assert_array_equal(out, -out[::-1])
        assert out[fine_grid.mid_index] == 0.0


def _bump(x, support=6.0):
    out = np.zeros_like(x)
    inside = np.abs(x) < support
    out[inside] = np.exp(-1.0 / (1.0 - (x[inside] / support) ** 2))
    return out


class TestDefiningEquation:
    """Weak form of (-d^2/dx^2 + eps) G = delta, without trusting the closed form.

    Feeding u = (-f'' + eps f) through the kernel with V = 1 must return f
    up to the second-difference truncation error.
    """

    @pytest.mark.parametrize("n_points", [1201, 2401])
    def test_reproduces_test_function(self, n_points):
        g = make_grid(12.0, n_points)
        eps = 0.7
        f = _bump(g.points)
        h = g.spacing
        lap = np.zeros_like(f)
        lap[1:-1] = (2.0 * f[1:-1] - f[:-2] - f[2:]) / (h * h)
        u = SampledFunction(g, lap + eps * f)
        ones = SampledFunction(g, np.ones_like(f))
        out = apply_kernel(GreensKernel(eps), ones, u).values
        assert np.max(np.abs(out - f)) < 0.1 * h * h

    def test_error_is_second_order(self):
        errs = []
        for n in (1201, 2401):
            g = make_grid(12.0, n)
            eps = 0.7
            f = _bump(g.points)
            h = g.spacing
            lap = np.zeros_like(f)
            lap[1:-1] = (2.0 * f[1:-1] - f[:-2] - f[2:]) / (h * h)
            out = apply_kernel(
                GreensKernel(eps), SampledFunction(g, np.ones_like(f)), SampledFunction(g, lap + eps * f)
            ).values
            errs.append(np.max(np.abs(out - f)))
        assert 3.0 < errs[0] / errs[1] < 5.0
