"""Quadrature-polarization EPR machinery.

The detected observable at each far-field pixel is a polarization
component selected by a retarder angle gamma and rotator angle theta,
measured in the homodyne quadrature psi.  Correlations between the
pixels at +k and -k are quantified by the spectral variance of the
gain-weighted quadrature difference, whose shot reference is
sigma * (1 + |g|^2) and whose EPR reference is sigma.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OpoParams, TransverseMode, _transfer_arrays, critical_points
from .errors import DegenerateModeError, ZeroDenominatorError
from .gridio import AxisSpec, ScanGrid


@dataclass(frozen=True)
class PolQuadSelection:
    """Retarder/rotator/homodyne angles at the +k detector (a) and the
    -k detector (b).  The variance depends on the four phase angles only
    through psi_a + psi_b + gamma_a and psi_a + psi_b + gamma_b."""

    gamma_a: float
    theta_a: float
    psi_a: float
    gamma_b: float
    theta_b: float
    psi_b: float


@dataclass(frozen=True)
class GainSetting:
    """Electronic gain applied to the -k detector signal."""

    kind: str               # "unit" | "optimal" | "fixed"
    value: complex = 1.0

    @classmethod
    def unit(cls):
        return cls("unit", 1.0)

    @classmethod
    def optimal(cls):
        return cls("optimal")

    @classmethod
    def fixed(cls, g: complex):
        return cls("fixed", complex(g))


@dataclass(frozen=True)
class EntanglementResult:
    entangled: bool
    position: float       # variance of the quadrature difference, / sigma
    momentum: float       # variance of the orthogonal-quadrature sum, / sigma


def _four_point_coeffs(p, kx, ky, w):
    """Transfer coefficients at (+-k, +-w); w may be an array."""
    a = _transfer_arrays(p, kx, ky, w)         # (k,  w)
    b = _transfer_arrays(p, kx, ky, -w)        # (k, -w)
    c = _transfer_arrays(p, -kx, -ky, -w)      # (-k, -w)
    d = _transfer_arrays(p, -kx, -ky, w)       # (-k,  w)
    return a, b, c, d


def _variance_terms(p, kx, ky, w, phi: PolQuadSelection, g, psi_sum=None):
    """The four-term spectral variance; psi_sum overrides psi_a+psi_b
    (may be an array broadcasting against w)."""
    (u1a, _, _, v2a), (u1b, _, _, v2b), (u1c, _, _, v2c), (u1d, _, _, v2d) = \
        _four_point_coeffs(p, kx, ky, w)
    s = (phi.psi_a + phi.psi_b) if psi_sum is None else psi_sum
    e_gb = np.exp(1j * (s + phi.gamma_b))
    e_ga = np.exp(1j * (s + phi.gamma_a))
    ct, st = np.cos(phi.theta_a), np.sin(phi.theta_a)
    ctp, stp = np.cos(phi.theta_b), np.sin(phi.theta_b)
    gc = np.conj(g)
    t1 = np.abs(e_gb * ct * u1a - gc * stp * np.conj(v2c)) ** 2
    t2 = np.abs(e_gb * gc * stp * u1b - ct * np.conj(v2d)) ** 2
    t3 = np.abs(e_ga * st * u1c - gc * ctp * np.conj(v2a)) ** 2
    t4 = np.abs(e_ga * gc * ctp * u1d - st * np.conj(v2b)) ** 2
    return p.sigma * (t1 + t2 + t3 + t4)


def epr_variance(p: OpoParams, k: TransverseMode, omega: float,
                 phi: PolQuadSelection, g: complex) -> float:
    """Spectral variance of the gain-weighted difference of the selected
    quadrature-polarization components at +k and -k."""
    if k.kx == 0.0 and k.ky == 0.0:
        raise DegenerateModeError("k = 0: the two detected modes coincide")
    return float(_variance_terms(p, k.kx, k.ky, omega, phi, g))


def selection_spectra(p: OpoParams, k: TransverseMode, omega: float | np.ndarray,
                      phi: PolQuadSelection, psi_sum=None):
    """(s_xx, num, den): the +k component's spectrum, the cross spectrum
    between the -k and +k components, and the -k component's spectrum.

    The variance for any gain assembles as
    s_xx - 2 Re(conj(g) num) + |g|^2 den.
    """
    kx, ky, w = k.kx, k.ky, omega
    u1a, v1a, u2a, v2a = _transfer_arrays(p, kx, ky, w)
    _, v1b, _, v2b = _transfer_arrays(p, kx, ky, -w)
    u1d, v1d, u2d, v2d = _transfer_arrays(p, -kx, -ky, w)
    _, v1c, _, v2c = _transfer_arrays(p, -kx, -ky, -w)
    ct2, st2 = np.cos(phi.theta_a) ** 2, np.sin(phi.theta_a) ** 2
    ctp2, stp2 = np.cos(phi.theta_b) ** 2, np.sin(phi.theta_b) ** 2
    s_xx = p.sigma * (ct2 * (np.abs(u1a) ** 2 + np.abs(v1b) ** 2)
                      + st2 * (np.abs(u2a) ** 2 + np.abs(v2b) ** 2))
    den = p.sigma * (ctp2 * (np.abs(u1d) ** 2 + np.abs(v1c) ** 2)
                     + stp2 * (np.abs(u2d) ** 2 + np.abs(v2c) ** 2))
    # cross spectra of the twin pair: c12(q, w) = u1(q, w) v2(-q, -w)
    c12_m = u1d * v2b            # at (-k, w)
    c21_m = u2d * v1b
    c12_p = u1a * v2c            # at (+k, w)
    c21_p = u2a * v1c
    s = (phi.psi_a + phi.psi_b) if psi_sum is None else psi_sum
    ct, st = np.cos(phi.theta_a), np.sin(phi.theta_a)
    ctp, stp = np.cos(phi.theta_b), np.sin(phi.theta_b)
    num = p.sigma * (np.exp(1j * (s + phi.gamma_a)) * ctp * st * c12_m
                     + np.exp(1j * (s + phi.gamma_b)) * stp * ct * c21_m
                     + np.exp(-1j * (s + phi.gamma_a)) * ctp * st * np.conj(c21_p)
                     + np.exp(-1j * (s + phi.gamma_b)) * stp * ct * np.conj(c12_p))
    return s_xx, num, den


def optimal_gain(p: OpoParams, k: TransverseMode, omega: float,
                 phi: PolQuadSelection) -> complex:
    """Gain minimizing the variance: cross spectrum over the -k
    component's spectrum, evaluated per analysis frequency."""
    if k.kx == 0.0 and k.ky == 0.0:
        raise DegenerateModeError("k = 0: the two detected modes coincide")
    _, num, den = selection_spectra(p, k, omega, phi)
    if np.any(den <= 0):
        raise ZeroDenominatorError("the -k component has no fluctuation spectrum")
    return complex(num / den)


def entanglement_predicate(p: OpoParams, k: TransverseMode, omega: float,
                           phi: PolQuadSelection, g: complex) -> EntanglementResult:
    """Evaluate the difference ('position') and orthogonal-sum
    ('momentum') combined variances; entangled iff both fall below the
    single-component shot level sigma."""
    pos = epr_variance(p, k, omega, phi, g) / p.sigma
    phi_m = PolQuadSelection(phi.gamma_a, phi.theta_a, phi.psi_a + np.pi / 2,
                             phi.gamma_b, phi.theta_b, phi.psi_b + 3 * np.pi / 2)
    mom = epr_variance(p, k, omega, phi_m, g) / p.sigma
    return EntanglementResult(bool(pos < 1.0 and mom < 1.0), pos, mom)


# Detection schemes: polarizer bases at the two symmetric pixels, with
# theta_b = theta_a + pi/2 and gamma_b = gamma_a + pi so the variance is
# built from orthogonally polarized twin components.
_SCHEMES = {
    # crossing points of the rings, insensitive to the rotator reference
    "kh": dict(angles=(np.pi, 0.0, 0.0, np.pi / 2), point="k_h"),
    # y-axis external points, locally dominant polarization selected
    "vbright": dict(angles=(np.pi, 0.0, 0.0, np.pi / 2), point="k_v"),
    # y-axis external points, orthogonal (weak) components selected
    "vdark": dict(angles=(np.pi, np.pi / 2, 0.0, np.pi), point="k_v"),
}


def scheme_selection(scheme: str, psi_a: float = 0.0, psi_b: float = 0.0) -> PolQuadSelection:
    ang = _SCHEMES[scheme.lower()]["angles"]
    return PolQuadSelection(ang[0], ang[1], psi_a, ang[2], ang[3], psi_b)


def scheme_detection_point(p: OpoParams, scheme: str) -> TransverseMode:
    cp = critical_points(p)
    return getattr(cp, _SCHEMES[scheme.lower()]["point"])


def variance_over_grid(p: OpoParams, k: TransverseMode, phi_base: PolQuadSelection,
                       g_mode: GainSetting, psi_sums: np.ndarray,
                       omegas: np.ndarray) -> np.ndarray:
    """Variance / sigma on the (psi_sum, omega) grid, vectorized."""
    if k.kx == 0.0 and k.ky == 0.0:
        raise DegenerateModeError("k = 0: the two detected modes coincide")
    w = np.asarray(omegas, float)[None, :]
    s = np.asarray(psi_sums, float)[:, None]
    s_xx, num, den = selection_spectra(p, k, w, phi_base, psi_sum=s)
    if g_mode.kind == "optimal":
        g = num / den
    elif g_mode.kind == "unit":
        g = np.ones(1)
    else:
        g = np.asarray(g_mode.value)
    v = _variance_terms(p, k.kx, k.ky, w, phi_base, g, psi_sum=s)
    return v / p.sigma


def epr_scan(p: OpoParams, scheme: str, g_mode: GainSetting,
             psi_axis: AxisSpec, omega_axis: AxisSpec) -> ScanGrid:
    """Scan the scheme's variance over (psi_a + psi_b, omega)."""
    phi = scheme_selection(scheme)
    k = scheme_detection_point(p, scheme)
    psis = psi_axis.points()
    oms = omega_axis.points()
    vals = variance_over_grid(p, k, phi, g_mode, psis, oms)
    return ScanGrid(x_axis=psi_axis, y_axis=omega_axis, values=vals)
