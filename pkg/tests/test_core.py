import math

import pytest

from opofar import (DegenerateDenominatorError, NoInstabilityError, OpoParams,
                    TransverseMode, critical_points, effective_detuning,
                    hopf_frequency, ring_residual, transfer_coeffs)
from conftest import random_params

KEXT = (1 + math.sqrt(5)) / 4   # external y-axis ordinate at the reference params
KINT = (-1 + math.sqrt(5)) / 4


class TestOpoParams:
    def test_defaults_are_reference_set(self, ref_params):
        assert (ref_params.gamma1, ref_params.gamma2) == (1.0, 1.0)
        assert (ref_params.delta1, ref_params.delta2) == (-0.25, -0.25)
        assert (ref_params.rho1, ref_params.rho2) == (0.0, 1.0)
        assert ref_params.a0 == 0.99 and ref_params.sigma == 1.0

    @pytest.mark.parametrize("kw", [
        dict(a0=1.0), dict(a0=-0.1), dict(gamma1=0.0), dict(a2=-1.0),
        dict(sigma=0.0), dict(delta1=float("nan")),
    ])
    def test_invalid_params_rejected(self, kw):
        with pytest.raises(ValueError):
            OpoParams(**kw)


class TestEffectiveDetuning:
    def test_vanishes_at_crossing_point(self, ref_params):
        # the crossing point is resonant at zero frequency
        assert effective_detuning(ref_params, 1, TransverseMode(0.5, 0.0), 0.0) == pytest.approx(0.0, abs=1e-15)
        assert effective_detuning(ref_params, 2, TransverseMode(0.5, 0.0), 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_zero_detuning_at_origin(self):
        p = OpoParams(delta1=0.0, delta2=0.0, a1=3.0, a2=0.7)
        for j in (1, 2):
            assert effective_detuning(p, j, TransverseMode(0.0, 0.0), 0.0) == 0.0

    def test_external_point_value(self, ref_params):
        # -0.25 + ky^2 + ky at the external ordinate
        got = effective_detuning(ref_params, 2, TransverseMode(0.0, KEXT), 0.0)
        assert got == pytest.approx(-0.25 + KEXT**2 + KEXT, rel=1e-14)
        assert got == pytest.approx(1.2135254915624212, rel=1e-12)

    def test_bad_field_index(self, ref_params):
        with pytest.raises(ValueError):
            effective_detuning(ref_params, 3, TransverseMode(0.0, 0.0), 0.0)


class TestTransferCoeffs:
    def test_no_pump_is_pure_phase(self, rng):
        p = random_params(rng, a0_max=0.0)
        for _ in range(5):
            tc = transfer_coeffs(p, TransverseMode(*rng.uniform(-2, 2, 2)), rng.uniform(-2, 2))
            assert tc.v1 == 0 and tc.v2 == 0
            assert abs(tc.u1) == pytest.approx(1.0, abs=1e-12)
            assert abs(tc.u2) == pytest.approx(1.0, abs=1e-12)

    def test_crossing_point_closed_form(self, ref_params):
        a0 = ref_params.a0
        tc = transfer_coeffs(ref_params, TransverseMode(0.5, 0.0), 0.0)
        assert tc.u1 == pytest.approx((1 + a0**2) / (1 - a0**2), rel=1e-12)
        assert tc.v1 == pytest.approx(2 * a0 / (1 - a0**2), rel=1e-12)
        assert abs(tc.u1.imag) < 1e-14 and abs(tc.v1.imag) < 1e-14
        assert tc.u2 == pytest.approx(tc.u1, rel=1e-12)

    def test_unitarity_random(self, rng):
        for _ in range(300):
            p = random_params(rng)
            tc = transfer_coeffs(p, TransverseMode(*rng.uniform(-2, 2, 2)), rng.uniform(-3, 3))
            assert abs(abs(tc.u1) ** 2 - abs(tc.v1) ** 2 - 1) < 1e-10
            assert abs(abs(tc.u2) ** 2 - abs(tc.v2) ** 2 - 1) < 1e-10

    def test_cross_relation_and_pairing(self, rng):
        for _ in range(100):
            p = random_params(rng)
            kx, ky = rng.uniform(-2, 2, 2)
            w = rng.uniform(-3, 3)
            tc = transfer_coeffs(p, TransverseMode(kx, ky), w)
            tm = transfer_coeffs(p, TransverseMode(-kx, -ky), -w)
            lhs = tc.u1 * tm.v2
            rhs = tc.v1 * tm.u2
            assert abs(lhs - rhs) < 1e-10 * (1 + abs(lhs))
            assert abs(abs(tc.v1) - abs(tm.v2)) < 1e-10
            assert abs(abs(tc.u1) - abs(tm.u2)) < 1e-10

    def test_reflection_symmetry_on_axis(self, rng):
        p = OpoParams()
        for _ in range(20):
            kx = rng.uniform(0.05, 1.5)
            w = rng.uniform(-2, 2)
            a = transfer_coeffs(p, TransverseMode(kx, 0.0), w)
            b = transfer_coeffs(p, TransverseMode(-kx, 0.0), w)
            assert a == b

    def test_degenerate_denominator_raises(self):
        p = OpoParams(a0=1 - 4.9e-13)
        with pytest.raises(DegenerateDenominatorError):
            transfer_coeffs(p, TransverseMode(0.5, 0.0), 0.0)


class TestHopfFrequency:
    def test_zero_at_crossing(self, ref_params):
        assert hopf_frequency(ref_params, TransverseMode(0.5, 0.0)) == 0.0

    def test_external_point(self, ref_params):
        assert hopf_frequency(ref_params, TransverseMode(0.0, KEXT)) == pytest.approx(0.4045084971874737, rel=1e-12)
        assert hopf_frequency(ref_params, TransverseMode(0.0, -KEXT)) == pytest.approx(-0.4045084971874737, rel=1e-12)


class TestRingResidual:
    def test_crossing_on_both_branches(self, ref_params):
        k = TransverseMode(0.5, 0.0)
        assert ring_residual(ref_params, k, "+") == pytest.approx(0.0, abs=1e-14)
        assert ring_residual(ref_params, k, "-") == pytest.approx(0.0, abs=1e-14)

    def test_origin(self, ref_params):
        assert ring_residual(ref_params, TransverseMode(0.0, 0.0), "+") == pytest.approx(-0.5)

    def test_external_point_on_minus_branch(self, ref_params):
        assert ring_residual(ref_params, TransverseMode(0.0, KEXT), "-") == pytest.approx(0.0, abs=1e-12)
        assert ring_residual(ref_params, TransverseMode(0.0, KINT), "+") == pytest.approx(0.0, abs=1e-12)

    def test_bad_branch(self, ref_params):
        with pytest.raises(ValueError):
            ring_residual(ref_params, TransverseMode(0.0, 0.0), "x")


class TestCriticalPoints:
    def test_reference_geometry(self, ref_params):
        cp = critical_points(ref_params)
        assert cp.k_h.kx == pytest.approx(0.5, rel=1e-14)
        assert cp.k_h.ky == 0.0
        assert cp.k_v.kx == 0.0
        assert cp.k_v.ky == pytest.approx(KEXT, rel=1e-12)
        assert sorted([cp.ky_plus, cp.ky_minus]) == pytest.approx([KINT, KEXT], rel=1e-12)

    def test_points_satisfy_ring_equation(self, rng):
        for _ in range(30):
            p = random_params(rng)
            if p.total_detuning() >= 0:
                continue
            cp = critical_points(p)
            assert abs(ring_residual(p, TransverseMode(0.0, cp.ky_plus), "+")) < 1e-9
            assert abs(ring_residual(p, TransverseMode(0.0, cp.ky_minus), "-")) < 1e-9
            assert abs(ring_residual(p, cp.k_h, "+")) < 1e-9

    def test_single_ring_when_walkoffs_match(self):
        p = OpoParams(rho1=0.7, rho2=0.7)
        cp = critical_points(p)
        assert cp.ky_plus == pytest.approx(cp.ky_minus, rel=1e-14)
        assert cp.ky_plus == pytest.approx(cp.k_h.kx, rel=1e-14)

    def test_no_instability_error(self):
        p = OpoParams(delta1=0.25, delta2=0.25)
        with pytest.raises(NoInstabilityError):
            critical_points(p)
