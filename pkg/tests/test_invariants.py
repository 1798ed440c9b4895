import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import polytrope as pt
from polytrope.invariants import _w_series_coeff

# frozen from high-precision runs of both solution routes
W3_AT_Z15 = 2.7219050562
PICARD_W3_VERBATIM_Z15 = 1.1146399695
PICARD_W3_MATCHED_Z15 = 2.6523608074


class TestInvariantsAt:
    def test_center_limits(self, emden):
        state = pt.invariants_at(emden(3.0), 0.0)
        assert (state.u, state.v, state.w, state.z) == (3.0, 0.0, 0.0, 0.0)
        assert state.omega == 0.0

    def test_center_omega_n0(self, emden):
        assert pt.invariants_at(emden(0.0), 0.0).omega == pytest.approx(1 / 3)

    def test_surface_rejected(self, emden):
        sol = emden(3.0)
        with pytest.raises(ValueError, match="surface"):
            pt.invariants_at(sol, sol.xi1)

    def test_omega_nan_for_n1(self, emden):
        assert math.isnan(pt.invariants_at(emden(1.0), 1.0).omega)

    @pytest.mark.parametrize("n", [0.0, 0.5, 2.0, 3.0, 4.5])
    def test_product_identity(self, n, emden):
        # (u v^n)^(1/(n-1)) == -xi^(1+2/(n-1)) theta' at 100 radii
        sol = emden(n)
        xi = np.linspace(1e-3, sol.xi1 * 0.995, 100)
        s = pt.invariants_at(sol, xi)
        from_product = (s.u * s.v**n) ** (1.0 / (n - 1.0))
        assert np.max(np.abs(from_product / s.omega - 1.0)) < 1e-8

    @pytest.mark.parametrize("n", [1.5, 3.0])
    def test_characteristic_system(self, n, emden):
        # du/dlog xi = u(3-u-w), dw/dlog xi = w(u-1+w/n)
        sol = emden(n)
        xi = np.linspace(0.3, sol.xi1 * 0.97, 40)
        h = 1e-5
        sp = pt.invariants_at(sol, xi * (1.0 + h))
        sm = pt.invariants_at(sol, xi * (1.0 - h))
        s = pt.invariants_at(sol, xi)
        du = (sp.u - sm.u) / (2.0 * h)
        dw = (sp.w - sm.w) / (2.0 * h)
        assert np.max(np.abs(du - s.u * (3.0 - s.u - s.w))) < 1e-5
        assert np.max(np.abs(dw - s.w * (s.u - 1.0 + s.w / n))) < 1e-5

    def test_n5_on_universal_line(self, emden):
        sol = emden(5.0)
        s = pt.invariants_at(sol, np.linspace(0.1, 50.0, 60))
        assert np.max(np.abs(s.w - (5.0 / 3.0) * (3.0 - s.u))) < 1e-9

    def test_omega_surface_limit_n3(self, emden):
        sol = emden(3.0)
        s = pt.invariants_at(sol, sol.xi1 * (1.0 - 1e-7))
        assert s.omega == pytest.approx(2.018, abs=1e-3)


class TestUwPlane:
    def test_u_stop_validation(self):
        for bad in (0.0, -1.0, 3.0):
            with pytest.raises(ValueError):
                pt.solve_uw_plane(2.0, u_stop=bad)

    def test_n5_curve_is_exact_line(self, uw_curve):
        c = uw_curve(5.0)
        assert np.max(np.abs(c.w - (5.0 / 3.0) * (3.0 - c.u))) < 1e-9
        assert c.omega0 == 0.0

    def test_n0_degenerate_point(self, uw_curve):
        c = uw_curve(0.0)
        assert c.omega0 == pytest.approx(1 / 3)
        assert list(c.u) == [3.0] and list(c.w) == [0.0]
        with pytest.raises(ValueError):
            c.w_at(1.0)

    def test_center_tangency(self, uw_curve):
        for n in [1.5, 3.0]:
            z = np.array([1e-5, 1e-4, 1e-3])
            w = uw_curve(n).w_at(z)
            assert w / z == pytest.approx(5.0 / 3.0, abs=2e-3)

    def test_center_curvature_coefficient(self, uw_curve):
        # w(z) = (5/3) z + 5(5-n)/(63 n) z^2 + O(z^3)
        for n in [2.0, 3.0]:
            z = 1e-3
            b = (uw_curve(n).w_at(z) - 5.0 * z / 3.0) / z**2
            assert b == pytest.approx(5.0 * (5.0 - n) / (63.0 * n), rel=1e-2)

    @pytest.mark.parametrize("n, printed, tol", [
        (2.0, 10.50, 0.01), (3.0, 2.018, 0.001), (1.5, 132.4, 0.2)])
    def test_omega0_estimates(self, n, printed, tol, uw_curve):
        c = uw_curve(n)
        assert c.omega0 == pytest.approx(printed, abs=tol)
        assert c.omega0_limit == pytest.approx(printed, abs=tol)

    @pytest.mark.parametrize("n", [1.5, 2.0, 3.0, 4.0])
    def test_omega0_limit_matches_direct_route(self, n, emden, uw_curve):
        direct = pt.derived_constants(emden(n)).omega0
        assert uw_curve(n).omega0_limit == pytest.approx(direct, rel=1e-8)
        assert uw_curve(n).omega0 == pytest.approx(direct, rel=5e-4)

    def test_omega0_nan_for_n1(self, uw_curve):
        assert math.isnan(uw_curve(1.0).omega0)
        with pytest.raises(ValueError):
            uw_curve(1.0).omega0_by_extrapolation()

    @pytest.mark.parametrize("n", [1.0, 2.0, 3.0])
    def test_curve_matches_direct_solution(self, n, emden, uw_curve):
        # regular-solution uniqueness: invariant-plane integration agrees
        # with invariants evaluated on the Lane-Emden solution
        sol = emden(n)
        xi = np.linspace(0.2, sol.xi1 * 0.98, 50)
        s = pt.invariants_at(sol, xi)
        keep = (s.u > 0.1) & (s.u < 2.9)
        w_curve = uw_curve(n).w_at(s.z[keep])
        assert np.max(np.abs(w_curve - s.w[keep])) < 1e-6

    def test_surface_divergence_rate(self, uw_curve, emden):
        # w -> n [omega0^(n-1)/u]^(1/n) as u -> 0
        for n in [2.0, 3.0]:
            c = uw_curve(n)
            om0 = pt.derived_constants(emden(n)).omega0
            for u in (1e-8, 1e-10):
                w = c.w_at(3.0 - u)
                assert w * u ** (1.0 / n) == pytest.approx(
                    n * om0 ** ((n - 1.0) / n), rel=1e-3)

    def test_partial_curve_has_no_surface_data(self):
        c = pt.solve_uw_plane(3.0, u_stop=0.5)
        assert not c.covers_surface
        assert math.isnan(c.omega0)
        with pytest.raises(ValueError):
            c.w_at(2.9)


class TestPicardW:
    def test_center_value_and_slope(self):
        assert pt.picard_w(3.0, 0.0) == 0.0
        for J in (-1.0, 0.5, 4.25):
            z = 1e-8
            slope = pt.picard_w(3.0, z, exponent=J) / z
            assert slope == pytest.approx(5.0 / 3.0, rel=1e-6)

    def test_verbatim_exponent(self):
        assert pt.volterra_exponent(3.0) == pytest.approx(17.0 / 4.0)
        assert pt.volterra_exponent(5.0) == pytest.approx(17.5)

    def test_matched_exponent(self):
        assert pt.series_matched_exponent(3.0) == pytest.approx(17.0 / 21.0)
        assert pt.series_matched_exponent(5.0) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            pt.series_matched_exponent(0.0)

    def test_n3_values_against_curve(self, uw_curve):
        w_true = uw_curve(3.0).w_at(1.5)
        assert w_true == pytest.approx(W3_AT_Z15, abs=1e-8)
        assert pt.picard_w(3.0, 1.5) == pytest.approx(PICARD_W3_VERBATIM_Z15,
                                                      abs=1e-8)
        matched = pt.picard_w(3.0, 1.5,
                              exponent=pt.series_matched_exponent(3.0))
        assert matched == pytest.approx(PICARD_W3_MATCHED_Z15, abs=1e-8)
        # the stock exponent badly underestimates w mid-star; the
        # series-matched variant stays within a few percent
        assert abs(pt.picard_w(3.0, 1.5) - w_true) > 1.5
        assert abs(matched - w_true) < 0.08

    def test_n5_exactness_only_for_matched_exponent(self, uw_curve):
        z = np.linspace(0.0, 3.0, 31)
        exact = (5.0 / 3.0) * z
        matched = pt.picard_w(5.0, z, exponent=pt.series_matched_exponent(5.0))
        assert np.max(np.abs(matched - exact)) < 1e-12
        stock = pt.picard_w(5.0, z)
        assert np.max(np.abs(stock - exact)) > 1.0

    def test_matched_curvature(self, uw_curve):
        # matched exponent reproduces the regular solution through z^2
        for n in [2.0, 4.0]:
            z = 1e-3
            w = pt.picard_w(n, z, exponent=pt.series_matched_exponent(n))
            b = (w - 5.0 * z / 3.0) / z**2
            assert b == pytest.approx(_w_series_coeff(n), rel=1e-3)

    def test_domain(self):
        with pytest.raises(ValueError):
            pt.picard_w(3.0, 3.5)
        with pytest.raises(ValueError):
            pt.picard_w(3.0, -0.1)


class TestQuadratureProfiles:
    @pytest.mark.parametrize("n", [1.0, 1.5, 2.0, 3.0, 4.0])
    def test_cross_route_agreement(self, n, emden, uw_curve):
        # the invariant-plane route never sees the Lane-Emden integrator;
        # profiles must still agree with it pointwise
        sol = emden(n)
        xi = np.linspace(1e-3, 0.9 * sol.xi1, 60)
        s = pt.invariants_at(sol, xi)
        prof = pt.quadrature_profiles(uw_curve(n), s.z)
        theta, dth = sol.evaluate(xi)
        assert np.max(np.abs(prof.rho_frac - theta**n)) < 1e-5
        assert np.max(np.abs(prof.m_frac
                             - (-(xi**2) * dth / sol.surface_slope))) < 1e-5
        assert np.max(np.abs(prof.r_frac - xi / sol.xi1)) < 1e-5
        assert np.max(np.abs(prof.theta - theta)) < 1e-5

    def test_center_values(self, uw_curve):
        prof = pt.quadrature_profiles(uw_curve(3.0), np.array([0.0]))
        assert prof.rho_frac[0] == 1.0
        assert prof.m_frac[0] == 0.0
        assert prof.r_frac[0] == 0.0

    def test_surface_normalization(self, uw_curve):
        prof = pt.quadrature_profiles(uw_curve(3.0), np.array([2.9999999]))
        assert prof.m_frac[0] == pytest.approx(1.0, abs=1e-6)
        assert prof.r_frac[0] > 0.99
        assert prof.rho_frac[0] < 1e-6

    def test_n5_closed_forms(self, uw_curve):
        z = np.array([0.0, 1.0, 2.0])
        prof = pt.quadrature_profiles(uw_curve(5.0), z)
        assert prof.rho_frac == pytest.approx((1 - z / 3) ** 2.5)
        assert prof.theta == pytest.approx(np.sqrt(1 - z / 3))
        assert prof.m_frac == pytest.approx((z / 3) ** 1.5)
        assert np.all(np.isnan(prof.r_frac))

    def test_n0_rejected(self, uw_curve):
        with pytest.raises(ValueError):
            pt.quadrature_profiles(uw_curve(0.0), np.array([0.5]))

    def test_domain_and_order(self, uw_curve):
        with pytest.raises(ValueError):
            pt.quadrature_profiles(uw_curve(3.0), np.array([3.0]))
        # unsorted input comes back in input order
        z = np.array([1.5, 0.3, 2.2])
        prof = pt.quadrature_profiles(uw_curve(3.0), z)
        assert np.all(np.diff(prof.rho_frac[np.argsort(z)]) < 0)


class TestCoreLocator:
    @pytest.mark.parametrize("n", [1.0, 1.5, 2.0, 3.0, 4.0, 4.5])
    def test_density_band(self, n, emden):
        # rho(r_core)/rho_c stays near 0.4 for n >= 1
        core = pt.core_locator(emden(n))
        assert abs(core.rho_core_frac - 0.4) < 0.1

    def test_n1_values(self, emden):
        sol = emden(1.0)
        core = pt.core_locator(sol)
        assert core.xi_core / sol.xi1 == pytest.approx(0.66, abs=0.01)
        m_frac = (-core.xi_core**2 * sol.dtheta_at(core.xi_core)
                  / sol.surface_slope)
        assert m_frac == pytest.approx(0.60, abs=0.01)

    def test_curve_and_solution_agree(self, emden, uw_curve):
        sol_core = pt.core_locator(emden(3.0))
        curve_core = pt.core_locator(uw_curve(3.0))
        assert curve_core.z_core == 1.0
        assert curve_core.w_core == pytest.approx(sol_core.w_core, abs=1e-6)
        assert curve_core.rho_core_frac == pytest.approx(
            sol_core.rho_core_frac, abs=1e-6)

    def test_n0_rejected(self, emden, uw_curve):
        with pytest.raises(ValueError):
            pt.core_locator(emden(0.0))
        with pytest.raises(ValueError):
            pt.core_locator(uw_curve(0.0))

    def test_n5_core(self, emden):
        core = pt.core_locator(emden(5.0))
        assert core.xi_core == pytest.approx(math.sqrt(1.5), abs=1e-7)


@settings(max_examples=10, deadline=None)
@given(n=st.floats(min_value=1.2, max_value=4.6))
def test_curve_route_tracks_direct_route(n):
    sol = pt.integrate_emden(n, tol=1e-10)
    curve = pt.solve_uw_plane(n, tol=1e-9)
    xi = np.linspace(0.5, 0.9 * sol.xi1, 12)
    s = pt.invariants_at(sol, xi)
    assert np.max(np.abs(curve.w_at(s.z) - s.w)) < 1e-4
