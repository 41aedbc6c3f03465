"""Self-check suite behind the `validate` CLI subcommand: the oracle
and invariant checks that cross-examine the analytic modules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (OpoParams, TransverseMode, critical_points, hopf_frequency,
                   ring_residual, transfer_coeffs, _transfer_arrays)
from .epr import PolQuadSelection, epr_variance, optimal_gain, selection_spectra
from .oracle import (ModeLabel, mc_second_moments, stokes_spectral_integrand,
                     wick_moment)
from .quadrature import QuadratureSpec
from .stokes import stokes_superposition_variances


@dataclass
class Check:
    name: str
    ok: bool
    measured: float
    bound: float


def _rand_params(rng) -> OpoParams:
    return OpoParams(
        gamma1=rng.uniform(0.5, 2.0), gamma2=rng.uniform(0.5, 2.0),
        delta1=rng.uniform(-0.6, 0.2), delta2=rng.uniform(-0.6, 0.2),
        a1=rng.uniform(0.5, 2.0), a2=rng.uniform(0.5, 2.0),
        rho1=rng.uniform(-0.5, 0.5), rho2=rng.uniform(-1.5, 1.5),
        a0=rng.uniform(0.0, 0.999), sigma=1.0,
    )


def _check_unitarity(rng, n=200):
    worst_u = worst_x = worst_m = 0.0
    for _ in range(n):
        p = _rand_params(rng)
        kx, ky, w = rng.uniform(-2, 2, 3)
        u1, v1, u2, v2 = _transfer_arrays(p, kx, ky, w)
        u1m, v1m, u2m, v2m = _transfer_arrays(p, -kx, -ky, -w)
        worst_u = max(worst_u, abs(abs(u1) ** 2 - abs(v1) ** 2 - 1),
                      abs(abs(u2) ** 2 - abs(v2) ** 2 - 1))
        worst_x = max(worst_x, abs(u1 * v2m - v1 * u2m) / (1 + abs(u1 * v2m)))
        worst_m = max(worst_m, abs(abs(v1) - abs(v2m)), abs(abs(u1) - abs(u2m)))
    return [Check("unitarity", worst_u < 1e-10, worst_u, 1e-10),
            Check("cross_relation", worst_x < 1e-10, worst_x, 1e-10),
            Check("magnitude_pairing", worst_m < 1e-10, worst_m, 1e-10)]


def _check_geometry(p):
    out = []
    if p.total_detuning() >= 0:
        return out
    cp = critical_points(p)
    res = max(abs(ring_residual(p, TransverseMode(0.0, cp.ky_plus), "+")),
              abs(ring_residual(p, TransverseMode(0.0, cp.ky_minus), "-")),
              abs(ring_residual(p, cp.k_h, "+")),
              abs(ring_residual(p, cp.k_h, "-")))
    out.append(Check("critical_ring_residuals", res < 1e-9, res, 1e-9))
    if p.delta1 == p.delta2 and p.a1 == p.a2:
        wh = abs(hopf_frequency(p, cp.k_h))
        out.append(Check("hopf_zero_at_crossing", wh < 1e-12, wh, 1e-12))
    return out


def _check_epr_closed_form():
    worst = 0.0
    for a0 in (0.5, 0.9, 0.99):
        p = OpoParams(a0=a0)
        kh = critical_points(p).k_h
        phi = PolQuadSelection(np.pi, 0.0, 0.0, 0.0, np.pi / 2, 0.0)
        got = epr_variance(p, kh, 0.0, phi, 1.0) / p.sigma
        want = 2.0 * ((1 - a0) / (1 + a0)) ** 2
        worst = max(worst, abs(got - want) / want)
    return [Check("epr_closed_form", worst < 1e-8, worst, 1e-8)]


def _check_pos_mom(rng, n=10):
    worst = 0.0
    for _ in range(n):
        p = _rand_params(rng)
        k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
        w = rng.uniform(-1.5, 1.5)
        phi = PolQuadSelection(*rng.uniform(-np.pi, np.pi, 6))
        g = complex(rng.normal(), rng.normal())
        pos = epr_variance(p, k, w, phi, g)
        phi_m = PolQuadSelection(phi.gamma_a, phi.theta_a, phi.psi_a + np.pi / 2,
                                 phi.gamma_b, phi.theta_b, phi.psi_b + 3 * np.pi / 2)
        mom = epr_variance(p, k, w, phi_m, g)
        worst = max(worst, abs(pos - mom) / (abs(pos) + 1e-30))
    return [Check("position_momentum_equality", worst < 1e-10, worst, 1e-10)]


def _check_gbar(rng, n=10):
    worst = 0.0
    for _ in range(n):
        p = _rand_params(rng)
        k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
        w = rng.uniform(-1.5, 1.5)
        phi = PolQuadSelection(*rng.uniform(-np.pi, np.pi, 6))
        gbar = optimal_gain(p, k, w, phi)
        v0 = epr_variance(p, k, w, phi, gbar)
        for _ in range(100):
            g = complex(rng.normal(scale=2), rng.normal(scale=2))
            worst = max(worst, v0 - epr_variance(p, k, w, phi, g))
    return [Check("gbar_optimality", worst < 1e-12, worst, 1e-12)]


def _check_variance_assembly(rng, n=20):
    worst = 0.0
    for _ in range(n):
        p = _rand_params(rng)
        k = TransverseMode(*rng.uniform(0.1, 1.2, 2))
        w = float(rng.uniform(-1.5, 1.5))
        phi = PolQuadSelection(*rng.uniform(-np.pi, np.pi, 6))
        g = complex(rng.normal(), rng.normal())
        sxx, num, den = selection_spectra(p, k, w, phi)
        assembled = float(sxx - 2 * np.real(np.conj(g) * num) + abs(g) ** 2 * den)
        direct = epr_variance(p, k, w, phi, g)
        worst = max(worst, abs(assembled - direct) / (1 + abs(direct)))
    return [Check("variance_vs_correlators", worst < 1e-10, worst, 1e-10)]


def _check_wick_table(rng):
    p = _rand_params(rng)
    k = TransverseMode(0.3, -0.7)
    w = 0.45
    tc = transfer_coeffs(p, k, w)
    tcm = transfer_coeffs(p, -k, -w)
    mk = lambda f, q, om, dag: ModeLabel(f, q, om, dag)
    cases = [
        ([mk(1, k, w, True), mk(1, k, w, False)], abs(tc.v1) ** 2),
        ([mk(2, k, w, True), mk(2, k, w, False)], abs(tc.v2) ** 2),
        ([mk(1, k, w, False), mk(1, k, w, True)], abs(tc.u1) ** 2),
        ([mk(2, k, w, False), mk(2, k, w, True)], abs(tc.u2) ** 2),
        ([mk(1, k, w, False), mk(2, -k, -w, False)], tc.u1 * tcm.v2),
        ([mk(2, k, w, False), mk(1, -k, -w, False)], tc.u2 * tcm.v1),
        ([mk(1, k, w, True), mk(2, -k, -w, True)], np.conj(tcm.u2 * tc.v1)),
        ([mk(1, k, w, False), mk(2, k, w, False)], 0.0),
        ([mk(1, k, w, False), mk(1, -k, -w, False)], 0.0),
        ([mk(1, k, w, True), mk(2, k, w, False)], 0.0),
    ]
    worst = 0.0
    for ops, want in cases:
        got = wick_moment(p, ops)
        worst = max(worst, abs(got - want))
    return [Check("wick_two_operator_table", worst < 1e-12, worst, 1e-12)]


def _hand_integrands(p, kx, ky, nu):
    u1k, v1k, u2k, v2k = _transfer_arrays(p, kx, ky, nu)
    u1m, v1m, u2m, v2m = _transfer_arrays(p, -kx, -ky, -nu)
    g1s = abs(u1k) ** 2 * abs(v1k) ** 2 + abs(u2k) ** 2 * abs(v2k) ** 2
    g23s = abs(u2k) ** 2 * abs(v1k) ** 2 + abs(u1k) ** 2 * abs(v2k) ** 2
    g1t = -(abs(u1k) ** 2 * abs(v2m) ** 2 + abs(u2k) ** 2 * abs(v1m) ** 2)
    g23t = 2 * np.real(np.conj(u1k) * u1m * np.conj(v2m) * v2k)
    return g1s, g23s, g1t, g23t


def _check_wick_integrands(rng, n=5):
    worst = worst23 = 0.0
    for _ in range(n):
        p = _rand_params(rng)
        kx, ky, nu = rng.uniform(-1, 1, 3)
        k = TransverseMode(kx, ky)
        km = TransverseMode(-kx, -ky)
        g1s, g23s, g1t, g23t = _hand_integrands(p, kx, ky, nu)
        pairs = [
            (stokes_spectral_integrand(p, 1, k, k, nu), g1s),
            (stokes_spectral_integrand(p, 2, k, k, nu), g23s),
            (stokes_spectral_integrand(p, 1, k, km, nu), g1t),
            (stokes_spectral_integrand(p, 2, k, km, nu), g23t),
        ]
        for got, want in pairs:
            worst = max(worst, abs(got - want) / (abs(want) + 1e-30))
        g2 = stokes_spectral_integrand(p, 2, k, km, nu)
        g3 = stokes_spectral_integrand(p, 3, k, km, nu)
        worst23 = max(worst23, abs(g2 - g3) / (abs(g2) + 1e-30))
    return [Check("wick_gamma_integrands", worst < 1e-8, worst, 1e-8),
            Check("gamma2_equals_gamma3", worst23 < 1e-8, worst23, 1e-8)]


def _check_mc(p, rng, n_samples=20000):
    worst = 0.0
    for _ in range(2):
        k = TransverseMode(*rng.uniform(0.1, 1.0, 2))
        w = float(rng.uniform(-1.0, 1.0))
        from .correlators import second_moments
        sm = second_moments(p, k, w)
        mc = mc_second_moments(p, k, w, n_samples, seed=int(rng.integers(1 << 31)))
        worst = max(worst,
                    abs(mc.n1 - sm.n1) / max(mc.se_n1, 1e-30) / 5.0,
                    abs(mc.n2 - sm.n2) / max(mc.se_n2, 1e-30) / 5.0,
                    abs(mc.c12 - sm.c12) / max(mc.se_c12, 1e-30) / 5.0)
    return [Check("mc_second_moments_5se", worst < 1.0, worst, 1.0)]


def _check_d1(p, q, rng, n=3):
    worst = 0.0
    for _ in range(n):
        k = TransverseMode(*rng.uniform(0.1, 0.9, 2))
        sv = stokes_superposition_variances(p, k, q)
        scale = max(sv.shot_pair, 1e-30)
        worst = max(worst, abs(sv.d1) / scale)
    return [Check("d1_exact_zero", worst < 1e-8, worst, 1e-8)]


def run_validation(p: OpoParams, q: QuadratureSpec, seed: int = 12345) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    checks += _check_unitarity(rng)
    checks += _check_geometry(p)
    checks += _check_epr_closed_form()
    checks += _check_pos_mom(rng)
    checks += _check_gbar(rng)
    checks += _check_variance_assembly(rng)
    checks += _check_wick_table(rng)
    checks += _check_wick_integrands(rng)
    checks += _check_mc(p, rng)
    checks += _check_d1(p, q, rng)
    return checks
