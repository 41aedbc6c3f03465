"""Stokes-operator means, polarization degree, and the zero-frequency
self/twin correlation and superposition-variance machinery.

All spectral correlations are evaluated at zero analysis frequency
(detection integrated over times long against the cavity lifetime).
Each result assembles every needed frequency integrand into one
vector-valued adaptive quadrature, so the exact cancellations between
self and twin pieces survive in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OpoParams, TransverseMode, _transfer_arrays, resonance_frequencies
from .errors import UndefinedPolarizationError
from .quadrature import QuadratureSpec, integrate_spectrum, spectral_tail

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class StokesMeans:
    """First moments of S0..S3 (photon-flux units times sigma); the
    intensity-difference bases average to zero for twin-beam emission,
    so s2 = s3 = 0 identically."""

    s0: float
    s1: float
    s2: float
    s3: float


@dataclass(frozen=True)
class StokesCorrelations:
    """Zero-frequency spectral correlations of the Stokes operators.
    Unset components are NaN.  shot is the coherent-state reference
    <S0> * sigma common to all three."""

    g1_self: float
    g23_self: float
    g1_twin: float
    g23_twin: float
    shot: float


@dataclass(frozen=True)
class SuperpositionVariances:
    """Variances of the twin-pixel Stokes superpositions: d1 for the sum
    of the intensity-difference operators, d23 for the difference of the
    45-degree / circular ones.  Normal-ordered values subtract the
    two-pixel shot noise shot_pair."""

    d1: float
    d23: float
    d1_normal: float
    d23_normal: float
    shot_pair: float


def _pair_integrand(p, kx, ky):
    """All frequency integrands needed at the pixel pair (k, -k).

    Components:
      0 g1 self at k        1 g1 self at -k
      2 g1 twin (k,-k)      3 g1 twin (-k,k)
      4 g23 self at k       5 g23 self at -k
      6 g23 twin (k,-k)     7 g23 twin (-k,k)
      8 s0 at k             9 s0 at -k
     10 s1 at k            11 s1 at -k
    """
    def f(w):
        u1k, v1k, u2k, v2k = _transfer_arrays(p, kx, ky, w)
        u1m, v1m, u2m, v2m = _transfer_arrays(p, -kx, -ky, w)
        u1km, v1km, u2km, v2km = _transfer_arrays(p, kx, ky, -w)
        u1mm, v1mm, u2mm, v2mm = _transfer_arrays(p, -kx, -ky, -w)
        au1k, av1k, au2k, av2k = (np.abs(u1k)**2, np.abs(v1k)**2,
                                  np.abs(u2k)**2, np.abs(v2k)**2)
        au1m, av1m, au2m, av2m = (np.abs(u1m)**2, np.abs(v1m)**2,
                                  np.abs(u2m)**2, np.abs(v2m)**2)
        g1s_k = au1k * av1k + au2k * av2k
        g1s_m = au1m * av1m + au2m * av2m
        g1t_km = -(au1k * np.abs(v2mm)**2 + au2k * np.abs(v1mm)**2)
        g1t_mk = -(au1m * np.abs(v2km)**2 + au2m * np.abs(v1km)**2)
        g23s_k = au2k * av1k + au1k * av2k
        g23s_m = au2m * av1m + au1m * av2m
        g23t_km = 2 * np.real(np.conj(u1k) * u1mm * np.conj(v2mm) * v2k)
        g23t_mk = 2 * np.real(np.conj(u1m) * u1km * np.conj(v2km) * v2m)
        s0_k = av1k + av2k
        s0_m = av1m + av2m
        s1_k = av1k - av2k
        s1_m = av1m - av2m
        return np.stack([g1s_k, g1s_m, g1t_km, g1t_mk, g23s_k, g23s_m,
                         g23t_km, g23t_mk, s0_k, s0_m, s1_k, s1_m])
    return f


def _pair_breakpoints(p, kx, ky):
    res = resonance_frequencies(p, kx, ky) + resonance_frequencies(p, -kx, -ky)
    return sorted(set(res + [-r for r in res]))


def _pair_integrals(p, k: TransverseMode, q: QuadratureSpec) -> np.ndarray:
    if p.a0 == 0.0:
        return np.zeros(12)
    tail = spectral_tail(p, [(k.kx, k.ky), (-k.kx, -k.ky)], tail_factor=4.0)
    res = integrate_spectrum(_pair_integrand(p, k.kx, k.ky), p, q,
                             breakpoints=_pair_breakpoints(p, k.kx, k.ky),
                             tail=tail)
    return res.value


def stokes_means(p: OpoParams, k: TransverseMode,
                 q: QuadratureSpec | None = None) -> StokesMeans:
    """Stationary Stokes means: s0/s1 from the frequency integrals of
    |v1|^2 +- |v2|^2; s2 and s3 vanish identically."""
    if q is None:
        q = QuadratureSpec.default_for(p)
    if p.a0 == 0.0:
        return StokesMeans(0.0, 0.0, 0.0, 0.0)

    def f(w):
        _, v1, _, v2 = _transfer_arrays(p, k.kx, k.ky, w)
        av1, av2 = np.abs(v1)**2, np.abs(v2)**2
        return np.stack([av1 + av2, av1 - av2])

    tail = spectral_tail(p, [(k.kx, k.ky)])
    res = integrate_spectrum(f, p, q, tail=tail,
                             breakpoints=resonance_frequencies(p, k.kx, k.ky))
    s0, s1 = p.sigma / TWO_PI * res.value
    return StokesMeans(float(s0), float(s1), 0.0, 0.0)


def polarization_degree(p: OpoParams, k: TransverseMode,
                        q: QuadratureSpec | None = None) -> float:
    """|<S1>| / <S0>, in [0, 1]; undefined in dark regions."""
    if q is None:
        q = QuadratureSpec.default_for(p)
    m = stokes_means(p, k, q)
    if m.s0 < q.abs_tol:
        raise UndefinedPolarizationError(
            f"s0 = {m.s0:.3e} below the masking threshold {q.abs_tol:.1e}")
    return float(abs(m.s1) / m.s0)


def stokes_self_correlations(p: OpoParams, k: TransverseMode,
                             q: QuadratureSpec | None = None) -> StokesCorrelations:
    """Same-pixel correlations of S1 and of S2/S3 (equal by symmetry of
    the 45-degree and circular bases), plus the local shot noise."""
    if q is None:
        q = QuadratureSpec.default_for(p)
    vals = _pair_integrals(p, k, q)
    sig2 = p.sigma * p.sigma / TWO_PI
    return StokesCorrelations(
        g1_self=float(sig2 * vals[0]),
        g23_self=float(sig2 * vals[4]),
        g1_twin=float("nan"),
        g23_twin=float("nan"),
        shot=float(sig2 * vals[8]),
    )


def stokes_twin_correlations(p: OpoParams, k: TransverseMode,
                             q: QuadratureSpec | None = None) -> StokesCorrelations:
    """Opposite-pixel correlations; the S1 twin correlation integrand is
    evaluated on its own and mirrors the self correlation exactly."""
    if q is None:
        q = QuadratureSpec.default_for(p)
    vals = _pair_integrals(p, k, q)
    sig2 = p.sigma * p.sigma / TWO_PI
    return StokesCorrelations(
        g1_self=float(sig2 * vals[0]),
        g23_self=float(sig2 * vals[4]),
        g1_twin=float(sig2 * vals[2]),
        g23_twin=float(sig2 * vals[6]),
        shot=float(sig2 * vals[8]),
    )


def stokes_superposition_variances(p: OpoParams, k: TransverseMode,
                                   q: QuadratureSpec | None = None) -> SuperpositionVariances:
    """Assemble d1 and d23 from the self and twin pieces on shared
    quadrature nodes; d1 cancels exactly for any k, so its normal-ordered
    value equals minus the two-pixel shot noise."""
    if q is None:
        q = QuadratureSpec.default_for(p)
    vals = _pair_integrals(p, k, q)
    sig2 = p.sigma * p.sigma / TWO_PI
    d1 = sig2 * (vals[0] + vals[1] + vals[2] + vals[3])
    d23 = sig2 * (vals[4] + vals[5] - vals[6] - vals[7])
    shot_pair = sig2 * (vals[8] + vals[9])
    return SuperpositionVariances(
        d1=float(d1), d23=float(d23),
        d1_normal=float(d1 - shot_pair), d23_normal=float(d23 - shot_pair),
        shot_pair=float(shot_pair),
    )


def commutator_average(p: OpoParams, k: TransverseMode,
                       q: QuadratureSpec | None = None):
    """(<S3(k) - S3(-k)>, |<S3(k)>|^2): the average commutator of the
    twin-pixel superpositions and the local Heisenberg bound.  Both
    vanish identically for vacuum-fed twin-beam emission."""
    mk = stokes_means(p, k, q)
    mm = stokes_means(p, TransverseMode(-k.kx, -k.ky), q)
    return mk.s3 - mm.s3, abs(mk.s3) ** 2
