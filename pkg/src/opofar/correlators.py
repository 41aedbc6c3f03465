"""Output-field second moments, far-field intensity and local
quadrature spectra."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OpoParams, TransverseMode, _transfer_arrays, resonance_frequencies
from .quadrature import QuadratureSpec, integrate_spectrum, spectral_tail


@dataclass(frozen=True)
class SecondMoments:
    """Non-vanishing output second moments at one (k, omega):
    n1 = |v1(k,w)|^2, n2 = |v2(k,w)|^2 and the twin-beam cross spectrum
    c12 = u1(k,w) v2(-k,-w).  Unitarity ties them together through
    |c12|^2 = n1 (1 + n1)."""

    n1: float
    n2: float
    c12: complex


def second_moments(p: OpoParams, k: TransverseMode, omega: float) -> SecondMoments:
    u1, v1, _, v2 = _transfer_arrays(p, k.kx, k.ky, omega)
    _, _, _, v2m = _transfer_arrays(p, -k.kx, -k.ky, -omega)
    return SecondMoments(n1=float(abs(v1) ** 2), n2=float(abs(v2) ** 2),
                         c12=complex(u1 * v2m))


def _intensity_integrand(p, kx, ky):
    def f(w):
        _, v1, _, v2 = _transfer_arrays(p, kx, ky, w)
        return np.abs(v1) ** 2 + np.abs(v2) ** 2
    return f


def farfield_intensity(p: OpoParams, k: TransverseMode,
                       q: QuadratureSpec | None = None) -> float:
    """Stationary mean intensity sigma/(2 pi) * Int dw (|v1|^2 + |v2|^2)."""
    if q is None:
        q = QuadratureSpec.default_for(p)
    if p.a0 == 0.0:
        return 0.0
    tail = spectral_tail(p, [(k.kx, k.ky)])
    res = integrate_spectrum(_intensity_integrand(p, k.kx, k.ky), p, q,
                             breakpoints=resonance_frequencies(p, k.kx, k.ky),
                             tail=tail)
    return p.sigma / (2.0 * np.pi) * float(res.value[0])


def local_quadrature_spectrum(p: OpoParams, k: TransverseMode, omega: float,
                              theta: float) -> float:
    """Spectral variance of one quadrature-polarization component at k.

    sigma * [1 + cos^2(theta)(|v1(k,w)|^2 + |v1(k,-w)|^2)
               + sin^2(theta)(|v2(k,w)|^2 + |v2(k,-w)|^2)];
    independent of the retarder and homodyne phases, and never below the
    shot level sigma.
    """
    _, v1p, _, v2p = _transfer_arrays(p, k.kx, k.ky, omega)
    _, v1m, _, v2m = _transfer_arrays(p, k.kx, k.ky, -omega)
    c2 = np.cos(theta) ** 2
    s2 = np.sin(theta) ** 2
    return float(p.sigma * (1.0 + c2 * (abs(v1p) ** 2 + abs(v1m) ** 2)
                            + s2 * (abs(v2p) ** 2 + abs(v2m) ** 2)))
