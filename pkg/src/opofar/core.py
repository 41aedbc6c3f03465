"""Model parameters, effective detunings, transfer coefficients and the
critical-mode geometry of a type-II OPO below threshold.

Scaled units throughout: space scaled with the diffraction strength,
time with the cavity decay rate.  The pump amplitude is real with the
signal-generation threshold at a0 = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominatorError, NoInstabilityError

#: |denominator| below this raises DegenerateDenominatorError.
DEN_EPS = 1e-12


@dataclass(frozen=True)
class OpoParams:
    """Physical constants of the two-field model.

    gamma1/gamma2: cavity linewidths, delta1/delta2: cavity detunings,
    a1/a2: diffraction strengths, rho1/rho2: transverse walk-off
    coefficients, a0: pump amplitude (0 <= a0 < 1), sigma: detection
    pixel area fixing the shot-noise scale.
    """

    gamma1: float = 1.0
    gamma2: float = 1.0
    delta1: float = -0.25
    delta2: float = -0.25
    a1: float = 1.0
    a2: float = 1.0
    rho1: float = 0.0
    rho2: float = 1.0
    a0: float = 0.99
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.gamma1 > 0 and self.gamma2 > 0):
            raise ValueError("cavity linewidths gamma1, gamma2 must be > 0")
        if not (self.a1 > 0 and self.a2 > 0):
            raise ValueError("diffraction strengths a1, a2 must be > 0")
        if not self.sigma > 0:
            raise ValueError("detection area sigma must be > 0")
        if not 0.0 <= self.a0 < 1.0:
            raise ValueError("pump amplitude must satisfy 0 <= a0 < 1 (below threshold)")
        for name in ("gamma1", "gamma2", "delta1", "delta2", "a1", "a2",
                     "rho1", "rho2", "a0", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"parameter {name} must be finite")

    def total_detuning(self) -> float:
        """gamma1*delta1 + gamma2*delta2; critical rings need this < 0."""
        return self.gamma1 * self.delta1 + self.gamma2 * self.delta2


@dataclass(frozen=True)
class TransverseMode:
    """A transverse wavenumber (kx, ky) in scaled units."""

    kx: float
    ky: float

    def __post_init__(self):
        if not (math.isfinite(self.kx) and math.isfinite(self.ky)):
            raise ValueError("wavenumber components must be finite")

    def __neg__(self) -> "TransverseMode":
        return TransverseMode(-self.kx, -self.ky)


@dataclass(frozen=True)
class TransferCoeffs:
    """The four input/output coefficients at a common (k, omega)."""

    u1: complex
    v1: complex
    u2: complex
    v2: complex


@dataclass(frozen=True)
class CriticalPoints:
    """Critical-mode geometry: the ring crossing point on the kx axis
    and the y-axis intersections, the outermost of which is k_v."""

    k_h: TransverseMode
    k_v: TransverseMode
    ky_plus: float
    ky_minus: float


def effective_detuning(p: OpoParams, j: int, k: TransverseMode, omega: float) -> float:
    """Frequency- and wavenumber-dependent detuning of field j.

    Delta_j(k, omega) = delta_j + a_j |k|^2 + rho_j k_y - omega/gamma_j.
    """
    if j not in (1, 2):
        raise ValueError("field index must be 1 or 2")
    return float(_detuning_arrays(p, j, k.kx, k.ky, omega))


def _detuning_arrays(p, j, kx, ky, omega):
    if j == 1:
        return p.delta1 + p.a1 * (kx * kx + ky * ky) + p.rho1 * ky - omega / p.gamma1
    return p.delta2 + p.a2 * (kx * kx + ky * ky) + p.rho2 * ky - omega / p.gamma2


def _transfer_arrays(p, kx, ky, omega, check=True):
    """Vectorized (u1, v1, u2, v2) over broadcastable kx, ky, omega."""
    d1 = _detuning_arrays(p, 1, kx, ky, omega)
    d2m = _detuning_arrays(p, 2, -kx, -ky, -omega)
    den1 = (1 + 1j * d1) * (1 - 1j * d2m) - p.a0 * p.a0
    d2 = _detuning_arrays(p, 2, kx, ky, omega)
    d1m = _detuning_arrays(p, 1, -kx, -ky, -omega)
    den2 = (1 + 1j * d2) * (1 - 1j * d1m) - p.a0 * p.a0
    if check:
        amin = min(np.min(np.abs(den1)), np.min(np.abs(den2)))
        if amin < DEN_EPS:
            raise DegenerateDenominatorError(
                f"|denominator| = {amin:.3e} < {DEN_EPS:.0e}")
    u1 = 2 * (1 - 1j * d2m) / den1 - 1
    v1 = 2 * p.a0 / den1
    u2 = 2 * (1 - 1j * d1m) / den2 - 1
    v2 = 2 * p.a0 / den2
    return u1, v1, u2, v2


def transfer_coeffs(p: OpoParams, k: TransverseMode, omega: float) -> TransferCoeffs:
    """Input/output coefficients of the two output fields at (k, omega).

    u1 = 2[1 - i Delta_2(-k,-w)]/den - 1,  v1 = 2 a0/den with
    den = [1 + i Delta_1(k,w)][1 - i Delta_2(-k,-w)] - a0^2; the second
    field swaps the roles of the two detunings.  Satisfies the two-mode
    unitarity |u_i|^2 - |v_i|^2 = 1.
    """
    u1, v1, u2, v2 = _transfer_arrays(p, k.kx, k.ky, omega)
    return TransferCoeffs(complex(u1), complex(v1), complex(u2), complex(v2))


def _hopf_arrays(p, kx, ky):
    pref = p.gamma1 * p.gamma2 / (p.gamma1 + p.gamma2)
    return pref * (p.delta1 - p.delta2 + (p.a1 - p.a2) * (kx * kx + ky * ky)
                   + (p.rho1 + p.rho2) * ky)


def hopf_frequency(p: OpoParams, k: TransverseMode) -> float:
    """Oscillation frequency of the mode at k that loses damping at threshold."""
    return float(_hopf_arrays(p, k.kx, k.ky))


def _ring_residual_arrays(p, kx, ky, sign):
    return (p.total_detuning()
            + (p.gamma1 * p.a1 + p.gamma2 * p.a2) * (kx * kx + ky * ky)
            + sign * (p.gamma2 * p.rho2 - p.gamma1 * p.rho1) * ky)


def ring_residual(p: OpoParams, k: TransverseMode, branch: str | int) -> float:
    """Left-hand side of the critical-ring equation on the chosen branch.

    Zero iff k lies on that ring.  Branch '+' is the ring on which the
    second field becomes undamped at threshold, branch '-' the first
    field's ring; the two coincide when gamma1*rho1 = gamma2*rho2.
    """
    sign = {"+": 1.0, "-": -1.0, 1: 1.0, -1: -1.0}.get(branch)
    if sign is None:
        raise ValueError("branch must be '+' or '-'")
    return float(_ring_residual_arrays(p, k.kx, k.ky, sign))


def critical_points(p: OpoParams, tol: float = 1e-9) -> CriticalPoints:
    """Ring crossing point k_h and the y-axis intersections.

    k_h = (sqrt(-total_detuning / (gamma1 a1 + gamma2 a2)), 0).  The two
    distinct non-negative y-axis ordinates are recovered from the ring
    quadratic and validated by back-substitution into the ring equation;
    k_v is the external point (larger ordinate).
    """
    if p.total_detuning() >= 0:
        raise NoInstabilityError("critical rings require gamma1*delta1 + gamma2*delta2 < 0")
    tsum = p.gamma1 * p.a1 + p.gamma2 * p.a2
    rad = -p.total_detuning() / tsum
    if rad < 0:
        raise NoInstabilityError("negative radicand: no crossing point")
    kxc = math.sqrt(rad)

    rel = p.gamma1 * p.rho1 - p.gamma2 * p.rho2
    disc = rel * rel - 4 * p.total_detuning() * tsum
    if disc < 0:
        raise NoInstabilityError("negative radicand: rings do not reach the ky axis")
    root = math.sqrt(disc)
    ky_plus = (rel + root) / (2 * tsum)
    ky_minus = (-rel + root) / (2 * tsum)
    for ky, br in ((ky_plus, "+"), (ky_minus, "-")):
        res = ring_residual(p, TransverseMode(0.0, ky), br)
        if abs(res) > tol:
            raise NoInstabilityError(
                f"y-axis ordinate {ky:.6g} fails back-substitution (residual {res:.3e})")
    return CriticalPoints(
        k_h=TransverseMode(kxc, 0.0),
        k_v=TransverseMode(0.0, max(ky_plus, ky_minus)),
        ky_plus=ky_plus,
        ky_minus=ky_minus,
    )


def resonance_frequencies(p: OpoParams, kx: float, ky: float) -> list[float]:
    """Frequencies where the denominators of the transfer coefficients
    are closest to their minimum (used to seed quadrature panels).

    For each field the two effective detunings entering its denominator
    vanish at separate frequencies; the denominator modulus bottoms out
    where they are equal.
    """
    w1 = p.gamma1 * (p.delta1 + p.a1 * (kx * kx + ky * ky) + p.rho1 * ky)
    w2m = -p.gamma2 * (p.delta2 + p.a2 * (kx * kx + ky * ky) - p.rho2 * ky)
    w2 = p.gamma2 * (p.delta2 + p.a2 * (kx * kx + ky * ky) + p.rho2 * ky)
    w1m = -p.gamma1 * (p.delta1 + p.a1 * (kx * kx + ky * ky) - p.rho1 * ky)
    out = [w1, w2m, 0.5 * (w1 + w2m), w2, w1m, 0.5 * (w2 + w1m)]
    return sorted(set(out))
