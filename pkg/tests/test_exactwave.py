import math

import numpy as np
import pytest

from lgradial.constants import C_LIGHT
from lgradial.errors import DiagnosticError, QuadratureConvergenceError
from lgradial.exactwave import (BesselModeParams, RSField, SpacetimePoint,
                                chi_bessel, chi_closed_form, fit_global_scale,
                                maxwell_residual, rs_bessel_field,
                                synthesize_lg, wave_residual)
from lgradial.lgmode import LGParams, lg_field
from lgradial.momentum import ExactMomentumParams
from lgradial.specfun import bessel_j

from conftest import K, OMEGA, W0

LAM = 2 * math.pi / K
T_RAY = W0**2 * OMEGA / C_LIGHT**2  # envelope (Rayleigh) time scale


def _bessel_params(m=2, sigma=1, tilt=0.05):
    return BesselModeParams(m=m, sigma=sigma, k_t=tilt * K,
                            k_z=math.sqrt(1 - tilt**2) * K)


def _point(r=0.4e-3, phi=0.7, z=5 * LAM, t=None, omega=None):
    t = 3.0 / (omega or OMEGA) if t is None else t
    return SpacetimePoint(r=r, phi=phi, z=z, t=t)


class TestSpacetimePoint:
    def test_lightcone_times_round_trip(self):
        p = SpacetimePoint(r=1.0, phi=0.0, z=2.0, t=1e-8)
        t = 0.5 * (p.t_plus + p.t_minus)
        z = 0.5 * C_LIGHT * (p.t_plus - p.t_minus)
        assert t == pytest.approx(p.t, rel=1e-15)
        assert z == pytest.approx(p.z, rel=1e-12)


class TestChiBessel:
    def test_on_axis_monopole(self):
        bp = _bessel_params(m=0)
        p = SpacetimePoint(r=0.0, phi=0.0, z=0.0, t=0.0)
        want = 1.0 / (bp.k * bp.k_t * math.sqrt(2.0))  # J_0(0) = 1, phase = 1
        assert chi_bessel(bp, p) == pytest.approx(want, rel=1e-14)

    def test_on_axis_vortex_vanishes(self):
        for m in (1, 2, 5):
            bp = _bessel_params(m=m)
            p = SpacetimePoint(r=0.0, phi=0.3, z=0.0, t=0.0)
            assert chi_bessel(bp, p) == 0.0

    def test_transverse_wavenumber_required(self):
        with pytest.raises(DiagnosticError):
            BesselModeParams(m=0, sigma=1, k_t=0.0, k_z=K)

    def test_momentum_azimuth_folds_as_phase(self):
        # chi(k_phi) = chi(0) * exp(sigma i m k_phi)
        bp = _bessel_params(m=3, sigma=-1)
        p = _point()
        base = chi_bessel(bp, p)
        shifted = chi_bessel(bp, p, k_phi=0.8)
        assert shifted == pytest.approx(base * np.exp(1j * bp.sigma * bp.m * 0.8),
                                        rel=1e-13)

    @pytest.mark.parametrize("sigma", [1, -1])
    def test_satisfies_wave_equation(self, sigma):
        bp = _bessel_params(m=2, sigma=sigma)
        resid = wave_residual(lambda q: chi_bessel(bp, q), _point(omega=bp.omega_k),
                              wavenumber=bp.k)
        assert resid < 1e-6

    def test_frequency_on_light_cone(self):
        bp = _bessel_params()
        assert bp.omega_k == pytest.approx(C_LIGHT * math.hypot(bp.k_t, bp.k_z), rel=1e-15)


class TestRSBesselField:
    def test_longitudinal_component_structure(self):
        bp = _bessel_params(m=1)
        p = _point()
        f = rs_bessel_field(bp, p)
        pref = ((1j * bp.sigma) ** bp.m / (bp.k * math.sqrt(2.0))
                * np.exp(-1j * bp.sigma * (bp.omega_k * p.t - bp.k_z * p.z - bp.m * p.phi)))
        want = pref * bp.k_t * bessel_j(bp.m, bp.k_t * p.r)
        assert f.F_z == pytest.approx(want, rel=1e-14)

    def test_finite_at_small_radius_for_m0(self):
        bp = _bessel_params(m=0)
        f = rs_bessel_field(bp, SpacetimePoint(r=1e-9, phi=0.0, z=0.0, t=0.0))
        assert np.isfinite([f.F_r, f.F_phi, f.F_z]).all()

    @pytest.mark.parametrize("m,sigma", [(0, 1), (1, 1), (2, -1), (3, 1)])
    def test_maxwell_equations(self, m, sigma):
        bp = _bessel_params(m=m, sigma=sigma)
        res = maxwell_residual(lambda q: rs_bessel_field(bp, q),
                               _point(omega=bp.omega_k), wavenumber=bp.k)
        assert res.curl_defect < 1e-6
        assert res.div_defect < 1e-6
        assert res.warning is None

    def test_corrupted_field_detected(self):
        # non-paraxial tilt so the longitudinal component carries real weight
        bp = _bessel_params(m=1, tilt=0.4)

        def corrupt(q):
            f = rs_bessel_field(bp, q)
            return RSField(f.F_r, f.F_phi, 2.0 * f.F_z)

        res = maxwell_residual(corrupt, _point(omega=bp.omega_k), wavenumber=bp.k)
        assert res.curl_defect > 1e-2

    def test_zero_field(self):
        zero = lambda q: RSField(0j, 0j, 0j)
        res = maxwell_residual(zero, _point(), wavenumber=K)
        assert res.curl_defect == 0.0
        assert res.div_defect == 0.0
        assert res.warning is None

    def test_rough_field_attaches_warning(self):
        # a sub-step ripple cannot converge under step halving
        bp = _bessel_params(m=0)

        def rough(q):
            f = rs_bessel_field(bp, q)
            ripple = 1e-5 * math.sin(q.r * 1e9 + q.z * 7.7e8)
            return RSField(f.F_r * (1 + ripple), f.F_phi, f.F_z)

        res = maxwell_residual(rough, _point(omega=bp.omega_k), wavenumber=bp.k)
        assert res.warning is not None

    def test_requires_off_axis_point(self):
        bp = _bessel_params()
        with pytest.raises(DiagnosticError):
            rs_bessel_field(bp, SpacetimePoint(r=0.0, phi=0.0, z=0.0, t=0.0))


class TestChiClosedForm:
    def test_vortex_vanishes_on_axis(self):
        p = ExactMomentumParams(1, 2, 1, OMEGA, W0)
        assert chi_closed_form(p, SpacetimePoint(r=0.0, phi=0.1, z=0.0, t=0.0)) == 0.0

    def test_focal_snapshot_is_real_profile(self):
        # at t_plus = 0 the beam parameter is real (w^2) and the modulus is a
        # Gaussian times a real-argument Laguerre polynomial
        p = ExactMomentumParams(2, 1, 1, OMEGA, W0)
        z = 0.3
        pt = SpacetimePoint(r=0.6 * W0, phi=0.8, z=z, t=-z / C_LIGHT)  # t_plus = 0
        assert pt.t_plus == 0.0
        carrier = np.exp(-1j * p.sigma * (p.Omega * pt.t_minus - p.m * pt.phi))
        profile = chi_closed_form(p, pt) / carrier
        assert abs(profile.imag) < 1e-12 * abs(profile)
        from lgradial.specfun import laguerre
        x = (0.6 * W0) ** 2 / W0**2
        want = (0.6 * W0) ** 1 / W0 ** (2 * (2 + 1 + 1)) * math.exp(-x) * laguerre(2, 1, x)
        assert profile.real == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("sigma", [1, -1])
    def test_satisfies_wave_equation(self, sigma):
        p = ExactMomentumParams(2, 1, sigma, OMEGA, W0)
        pt = SpacetimePoint(r=0.7e-3, phi=0.3, z=8 * LAM, t=5.0 / OMEGA)
        assert wave_residual(lambda q: chi_closed_form(p, q), pt, wavenumber=K) < 1e-5


class TestSynthesis:
    def test_gamma_integral_at_origin(self):
        # n = m = 0, t_plus = 0, r = 0: the radial integral is
        # int (k_plus + k) e^{-beta k} dk = k_plus / beta + 1 / beta^2
        p = ExactMomentumParams(0, 0, 1, OMEGA, W0)
        pt = SpacetimePoint(r=0.0, phi=0.0, z=0.0, t=0.0)
        got = synthesize_lg(p, pt, 64)
        want = p.k_plus / p.beta + 1.0 / p.beta**2
        assert got == pytest.approx(want, rel=1e-12)

    def test_minimum_order_enforced(self):
        p = ExactMomentumParams(0, 0, 1, OMEGA, W0)
        with pytest.raises(DiagnosticError):
            synthesize_lg(p, SpacetimePoint(0.0, 0.0, 0.0, 0.0), 4)

    @staticmethod
    def _sample_points(rng, count=200):
        return [SpacetimePoint(r=float(rv) * W0, phi=float(pv), z=float(zv) * W0,
                               t=float(tv) * T_RAY)
                for rv, pv, zv, tv in zip(rng.uniform(0.05, 2.8, count),
                                          rng.uniform(0, 2 * math.pi, count),
                                          rng.uniform(-3.0, 3.0, count),
                                          rng.choice([0.0, 0.5, -0.5], count))]

    def test_matches_closed_form_up_to_global_scale(self, rng):
        pts = self._sample_points(rng)
        for (n, m, sigma) in ((0, 0, 1), (2, 1, 1), (1, 3, -1), (3, 2, -1)):
            p = ExactMomentumParams(n, m, sigma, OMEGA, W0)
            synth = np.array([synthesize_lg(p, q, 128, check_convergence=False)
                              for q in pts])
            closed = np.array([chi_closed_form(p, q) for q in pts])
            _, resid = fit_global_scale(closed, synth)
            assert resid < 1e-6

    def test_fitted_scale_point_independent(self, rng):
        p = ExactMomentumParams(2, 2, 1, OMEGA, W0)
        pts = self._sample_points(rng, count=24)
        ratios = np.array([synthesize_lg(p, q, 128, check_convergence=False)
                           / chi_closed_form(p, q) for q in pts])
        spread = np.max(np.abs(ratios - ratios.mean())) / abs(ratios.mean())
        assert spread < 1e-6

    def test_far_tail_is_negligible(self):
        p = ExactMomentumParams(1, 1, 1, OMEGA, W0)
        peak_pt = SpacetimePoint(r=W0, phi=0.0, z=0.0, t=0.0)
        far_pt = SpacetimePoint(r=5.0 * W0, phi=0.0, z=0.0, t=0.0)
        peak = abs(synthesize_lg(p, peak_pt, 128))
        assert abs(synthesize_lg(p, far_pt, 128)) < 1e-8 * peak
        assert abs(chi_closed_form(p, far_pt)) < 1e-8 * abs(chi_closed_form(p, peak_pt))

    def test_convergence_check_runs(self):
        p = ExactMomentumParams(1, 1, 1, OMEGA, W0)
        pt = SpacetimePoint(r=0.8 * W0, phi=1.0, z=0.2 * W0, t=0.0)
        v = synthesize_lg(p, pt, 96, check_convergence=True)
        assert np.isfinite(v.real) and np.isfinite(v.imag)


class TestParaxialBridge:
    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_zero_node_modes_match_paraxial_lg(self, m):
        # n = 0 exact modes at the focal snapshot coincide with the paraxial
        # LG(0, l = m) profile: constant modulus ratio (k w0 ~ 1e4 >> 200)
        exact = ExactMomentumParams(0, m, 1, OMEGA, W0)
        par = LGParams(0, m, K, W0)
        assert par.paraxiality >= 200
        r = np.linspace(0.05, 2.5, 40) * W0
        chi = np.array([chi_closed_form(exact, SpacetimePoint(r=ri, phi=0.9, z=0.0, t=0.0))
                        for ri in r])
        lg = lg_field(par, r, 0.9, 0.0)
        ratio = np.abs(chi / lg)
        assert (ratio.max() - ratio.min()) / ratio.mean() < 1e-3


class TestGlobalScaleFit:
    def test_recovers_known_scale(self, rng):
        ref = rng.normal(size=50) + 1j * rng.normal(size=50)
        scale = 2.5 - 0.7j
        fitted, resid = fit_global_scale(ref, scale * ref)
        assert fitted == pytest.approx(scale, rel=1e-12)
        assert resid < 1e-14

    def test_zero_reference_rejected(self):
        with pytest.raises(DiagnosticError):
            fit_global_scale(np.zeros(5), np.ones(5))
