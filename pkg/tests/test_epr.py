import numpy as np
import pytest
from scipy.optimize import minimize

from opofar import (AxisSpec, DegenerateModeError, GainSetting, OpoParams,
                    PolQuadSelection, TransverseMode, critical_points,
                    entanglement_predicate, epr_scan, epr_variance, optimal_gain,
                    scheme_detection_point, scheme_selection, selection_spectra)
from opofar.epr import variance_over_grid
from conftest import random_params

KH = TransverseMode(0.5, 0.0)
PHI_ORTH = PolQuadSelection(np.pi, 0.0, 0.0, 0.0, np.pi / 2, 0.0)


def random_phi(rng):
    return PolQuadSelection(*rng.uniform(-np.pi, np.pi, 6))


class TestEprVariance:
    def test_vacuum_equals_shot(self, rng):
        p = random_params(rng, a0_max=0.0)
        for _ in range(5):
            v = epr_variance(p, TransverseMode(*rng.uniform(0.1, 1.5, 2)),
                             rng.uniform(-2, 2), random_phi(rng), 1.0)
            assert v == pytest.approx(2.0 * p.sigma, rel=1e-12)

    @pytest.mark.parametrize("a0", [0.5, 0.9, 0.99])
    def test_crossing_point_closed_form(self, a0):
        p = OpoParams(a0=a0)
        v = epr_variance(p, KH, 0.0, PHI_ORTH, 1.0)
        assert v / p.sigma == pytest.approx(2 * ((1 - a0) / (1 + a0)) ** 2, rel=1e-10)

    def test_degenerate_mode_error(self, ref_params):
        with pytest.raises(DegenerateModeError):
            epr_variance(ref_params, TransverseMode(0.0, 0.0), 0.0, PHI_ORTH, 1.0)

    def test_parallel_polarizations_never_entangled(self, ref_params):
        phi = PolQuadSelection(np.pi, 0.0, 0.0, 0.0, 0.0, 0.0)
        for w in np.linspace(-2, 2, 21):
            g = optimal_gain(ref_params, KH, w, phi)
            assert g == 0
            assert epr_variance(ref_params, KH, w, phi, g) >= ref_params.sigma

    def test_position_momentum_equality(self, rng):
        for _ in range(50):
            p = random_params(rng)
            k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
            w = rng.uniform(-1.5, 1.5)
            phi = random_phi(rng)
            g = complex(rng.normal(), rng.normal())
            pos = epr_variance(p, k, w, phi, g)
            phi_m = PolQuadSelection(phi.gamma_a, phi.theta_a, phi.psi_a + np.pi / 2,
                                     phi.gamma_b, phi.theta_b, phi.psi_b + 3 * np.pi / 2)
            mom = epr_variance(p, k, w, phi_m, g)
            assert abs(pos - mom) < 1e-10 * (abs(pos) + 1e-30)

    def test_theta_independence_at_crossing(self, ref_params):
        vals = []
        for th in (0.0, np.pi / 6, np.pi / 4, np.pi / 2):
            phi = PolQuadSelection(np.pi, th, 0.2, np.pi + np.pi, th + np.pi / 2, 0.1)
            vals.append(epr_variance(ref_params, KH, 0.4, phi, 1.0))
        assert max(vals) - min(vals) < 1e-10 * max(vals)

    def test_phase_combination_reduction(self, rng):
        for _ in range(20):
            p = random_params(rng)
            k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
            w = rng.uniform(-1.5, 1.5)
            phi = random_phi(rng)
            g = complex(rng.normal(), rng.normal())
            delta = rng.uniform(-np.pi, np.pi)
            shifted = PolQuadSelection(phi.gamma_a - delta, phi.theta_a, phi.psi_a + delta,
                                       phi.gamma_b - delta, phi.theta_b, phi.psi_b)
            a = epr_variance(p, k, w, phi, g)
            b = epr_variance(p, k, w, shifted, g)
            assert abs(a - b) < 1e-10 * (abs(a) + 1e-30)

    def test_frequency_symmetry_on_axis(self, ref_params):
        for w in (0.2, 0.7, 1.4):
            a = epr_variance(ref_params, KH, w, PHI_ORTH, 1.0)
            b = epr_variance(ref_params, KH, -w, PHI_ORTH, 1.0)
            assert abs(a - b) < 1e-10 * abs(a)


class TestOptimalGain:
    def test_vacuum_gain_is_zero(self, rng):
        p = random_params(rng, a0_max=0.0)
        assert optimal_gain(p, TransverseMode(0.3, 0.4), 0.2, random_phi(rng)) == 0

    def test_matches_brute_force_minimizer(self, rng):
        for _ in range(8):
            p = random_params(rng, a0_max=0.99)
            k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
            w = float(rng.uniform(-1.5, 1.5))
            phi = random_phi(rng)
            gbar = optimal_gain(p, k, w, phi)
            res = minimize(lambda q: epr_variance(p, k, w, phi, q[0] + 1j * q[1]),
                           [0.0, 0.0], method="Nelder-Mead",
                           options=dict(xatol=1e-10, fatol=1e-15, maxiter=40000,
                                        maxfev=40000))
            assert abs(gbar - (res.x[0] + 1j * res.x[1])) < 1e-6
            assert abs(epr_variance(p, k, w, phi, gbar) - res.fun) < 1e-10

    def test_optimality_against_random_gains(self, rng):
        for _ in range(20):
            p = random_params(rng)
            k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
            w = rng.uniform(-1.5, 1.5)
            phi = random_phi(rng)
            v0 = epr_variance(p, k, w, phi, optimal_gain(p, k, w, phi))
            for _ in range(100):
                g = complex(rng.normal(scale=2), rng.normal(scale=2))
                assert v0 <= epr_variance(p, k, w, phi, g) + 1e-12

    def test_variance_assembles_from_spectra(self, rng):
        for _ in range(30):
            p = random_params(rng)
            k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
            w = float(rng.uniform(-1.5, 1.5))
            phi = random_phi(rng)
            g = complex(rng.normal(), rng.normal())
            sxx, num, den = selection_spectra(p, k, w, phi)
            assembled = sxx - 2 * np.real(np.conj(g) * num) + abs(g) ** 2 * den
            assert assembled == pytest.approx(epr_variance(p, k, w, phi, g), rel=1e-12, abs=1e-12)


class TestEntanglementPredicate:
    def test_crossing_point_scheme(self, ref_params):
        res = entanglement_predicate(ref_params, KH, 0.0, PHI_ORTH, 1.0)
        want = 2 * ((1 - ref_params.a0) / (1 + ref_params.a0)) ** 2
        assert res.entangled
        assert res.position == pytest.approx(want, rel=1e-10)
        assert res.momentum == pytest.approx(want, rel=1e-10)

    def test_vacuum_not_entangled(self):
        p = OpoParams(a0=0.0)
        res = entanglement_predicate(p, KH, 0.0, PHI_ORTH, 1.0)
        assert not res.entangled
        assert res.position == pytest.approx(2.0)


class TestSchemes:
    def test_detection_points(self, ref_params):
        cp = critical_points(ref_params)
        assert scheme_detection_point(ref_params, "kh") == cp.k_h
        assert scheme_detection_point(ref_params, "vbright") == cp.k_v
        assert scheme_detection_point(ref_params, "vdark") == cp.k_v

    def test_scan_matches_scalar_evaluation(self, ref_params, rng):
        psi_axis = AxisSpec("psi_sum", -0.5, 0.5, 5)
        om_axis = AxisSpec("omega", -1.0, 1.0, 7)
        for scheme in ("kh", "vbright", "vdark"):
            grid = epr_scan(ref_params, scheme, GainSetting.unit(), psi_axis, om_axis)
            k = scheme_detection_point(ref_params, scheme)
            base = scheme_selection(scheme)
            for i, s in enumerate(psi_axis.points()):
                for j, w in enumerate(om_axis.points()):
                    phi = PolQuadSelection(base.gamma_a, base.theta_a, s,
                                           base.gamma_b, base.theta_b, 0.0)
                    want = epr_variance(ref_params, k, w, phi, 1.0) / ref_params.sigma
                    assert grid.values[i, j] == pytest.approx(want, rel=1e-12)

    def test_kh_scan_minimum_at_origin(self, ref_params):
        psi_axis = AxisSpec("psi_sum", -np.pi / 2, np.pi / 2, 61)
        om_axis = AxisSpec("omega", -2.0, 2.0, 81)
        grid = epr_scan(ref_params, "kh", GainSetting.unit(), psi_axis, om_axis)
        i, j = np.unravel_index(np.argmin(grid.values), grid.values.shape)
        assert psi_axis.points()[i] == pytest.approx(0.0, abs=1e-12)
        assert om_axis.points()[j] == pytest.approx(0.0, abs=1e-12)

    def test_vbright_hopf_degradation_peaks(self, ref_params):
        # at a small phase offset the unit-gain variance peaks at the
        # oscillation frequency of the detected critical modes
        k = scheme_detection_point(ref_params, "vbright")
        oms = np.linspace(-2, 2, 801)
        v = variance_over_grid(ref_params, k, scheme_selection("vbright"),
                               GainSetting.unit(), np.array([0.06]), oms)[0]
        from opofar import hopf_frequency
        wh = hopf_frequency(ref_params, k)
        mask_pos = (oms > 0.1) & (oms < 1.0)
        peak_pos = oms[mask_pos][np.argmax(v[mask_pos])]
        assert peak_pos == pytest.approx(wh, abs=0.02)

    def test_vdark_optimal_phase_rotated(self, ref_params):
        k = scheme_detection_point(ref_params, "vdark")
        psis = np.linspace(-np.pi / 2, np.pi / 2, 181)
        v = variance_over_grid(ref_params, k, scheme_selection("vdark"),
                               GainSetting.optimal(), psis, np.array([0.0]))[:, 0]
        psi_min = psis[np.argmin(v)]
        assert 0.76 <= psi_min <= 0.86

    def test_vbright_degrades_with_walkoff(self):
        vals = {}
        for rho2 in (1.0, 1.5):
            p = OpoParams(rho2=rho2)
            k = scheme_detection_point(p, "vbright")
            v = variance_over_grid(p, k, scheme_selection("vbright"),
                                   GainSetting.optimal(),
                                   np.array([0.0]), np.array([0.0]))
            vals[rho2] = float(v[0, 0])
        assert vals[1.5] > vals[1.0]

    def test_optimal_gain_never_worse_than_unit(self, ref_params):
        psi_axis = AxisSpec("psi_sum", -np.pi / 2, np.pi / 2, 31)
        om_axis = AxisSpec("omega", -2.0, 2.0, 41)
        for scheme in ("kh", "vbright", "vdark"):
            g1 = epr_scan(ref_params, scheme, GainSetting.unit(), psi_axis, om_axis)
            gb = epr_scan(ref_params, scheme, GainSetting.optimal(), psi_axis, om_axis)
            assert np.all(gb.values <= g1.values + 1e-10)
