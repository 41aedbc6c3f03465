"""Independent verification engines.

A Wick-contraction evaluator computes exact vacuum moments of arbitrary
products of output operators by expanding each over the input operators
and enumerating perfect pairings.  A seeded Monte-Carlo sampler of the
equivalent classical Gaussian ensemble estimates the second moments.
Both exist to cross-check the analytic correlator modules and are kept
free of their code paths.

Continuum delta functions are represented as exact label matching; the
pixel-area prefactors of the integrated formulas belong to the callers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OpoParams, TransverseMode, _transfer_arrays
from .errors import MomentBudgetError, OddMomentError

_MAX_OPS = 8


@dataclass(frozen=True)
class ModeLabel:
    """One output operator: field index, pixel, frequency, dagger flag."""

    field: int
    k: TransverseMode
    omega: float
    dagger: bool = False

    def conj(self) -> "ModeLabel":
        return ModeLabel(self.field, self.k, self.omega, not self.dagger)


@dataclass(frozen=True)
class LinearExpansion:
    """Expansion of one output operator over input operators: exactly a
    transmission term and a conjugate twin term."""

    terms: tuple  # ((coef, ModeLabel of an input operator), ...)


def expand_output(p: OpoParams, lbl: ModeLabel) -> LinearExpansion:
    u1, v1, u2, v2 = _transfer_arrays(p, lbl.k.kx, lbl.k.ky, lbl.omega)
    u = complex(u1 if lbl.field == 1 else u2)
    v = complex(v1 if lbl.field == 1 else v2)
    other = 2 if lbl.field == 1 else 1
    mirror = TransverseMode(-lbl.k.kx, -lbl.k.ky)
    if not lbl.dagger:
        terms = ((u, ModeLabel(lbl.field, lbl.k, lbl.omega, False)),
                 (v, ModeLabel(other, mirror, -lbl.omega, True)))
    else:
        terms = ((u.conjugate(), ModeLabel(lbl.field, lbl.k, lbl.omega, True)),
                 (v.conjugate(), ModeLabel(other, mirror, -lbl.omega, False)))
    return LinearExpansion(terms)


def _contract_pair(ea: LinearExpansion, eb: LinearExpansion) -> complex:
    """<A B> for two output operators, via <a a'^dag> = delta with the
    annihilator on the left; every other input contraction vanishes."""
    tot = 0.0 + 0.0j
    for ca, la in ea.terms:
        for cb, lb in eb.terms:
            if (not la.dagger) and lb.dagger and la.field == lb.field \
                    and la.k == lb.k and la.omega == lb.omega:
                tot += ca * cb
    return tot


def _pairings(n):
    idx = list(range(n))

    def rec(rest):
        if not rest:
            yield ()
            return
        first, tail = rest[0], rest[1:]
        for i in range(len(tail)):
            pair = (first, tail[i])
            for sub in rec(tail[:i] + tail[i + 1:]):
                yield (pair,) + sub

    yield from rec(idx)


def wick_moment(p: OpoParams, ops: list[ModeLabel]) -> complex:
    """Exact vacuum moment of an ordered product of output operators."""
    if len(ops) % 2:
        raise OddMomentError("odd moments vanish; give an even operator count")
    if len(ops) > _MAX_OPS:
        raise MomentBudgetError(f"at most {_MAX_OPS} operators supported")
    if not ops:
        return 1.0 + 0j
    exps = [expand_output(p, o) for o in ops]
    table = {}
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            table[(i, j)] = _contract_pair(exps[i], exps[j])
    total = 0.0 + 0.0j
    for pairing in _pairings(len(ops)):
        term = 1.0 + 0.0j
        for i, j in pairing:
            term *= table[(i, j)]
            if term == 0:
                break
        total += term
    return total


# Stokes bilinears: S_i(k) = sum of coef * A_fd^dag A_fa at pixel k.
_BILINEARS = {
    0: ((1.0 + 0j, 1, 1), (1.0 + 0j, 2, 2)),
    1: ((1.0 + 0j, 1, 1), (-1.0 + 0j, 2, 2)),
    2: ((1.0 + 0j, 1, 2), (1.0 + 0j, 2, 1)),
    3: ((-1j, 1, 2), (1j, 2, 1)),
}


def _bilinear_ops(i, k: TransverseMode, nu_dag, nu_ann):
    """Terms of S_i(k) with the daggered factor carrying internal
    frequency nu_dag and the annihilator nu_ann.  A daggered factor at
    internal frequency nu is the label A^dag(k, -nu)."""
    out = []
    for coef, fd, fa in _BILINEARS[i]:
        out.append((coef, [ModeLabel(fd, k, -nu_dag, True),
                           ModeLabel(fa, k, nu_ann, False)]))
    return out


def stokes_spectral_integrand(p: OpoParams, i: int, k: TransverseMode,
                              kprime: TransverseMode, nu: float) -> complex:
    """Frequency integrand of the connected <S_i(k) S_i(k')> spectral
    correlation at zero analysis frequency, reduced with the moments
    theorem entirely through wick_moment calls.

    Both internal frequency routings consistent with stationarity are
    summed; the disconnected product is removed routing by routing.
    """
    if i not in _BILINEARS:
        raise ValueError("Stokes index must be 0..3")
    total = 0.0 + 0.0j
    for qd, qa in ((nu, -nu), (-nu, nu)):
        for cp_, ops_p in _bilinear_ops(i, k, -nu, nu):
            for cq_, ops_q in _bilinear_ops(i, kprime, qd, qa):
                full = wick_moment(p, ops_p + ops_q)
                disc = wick_moment(p, ops_p) * wick_moment(p, ops_q)
                total += cp_ * cq_ * (full - disc)
    return total


def quadrature_terms(k: TransverseMode, omega: float, gamma: float,
                     theta: float, psi: float):
    """Coefficients of the frequency-omega component of the selected
    quadrature-polarization operator over the output-operator basis."""
    return [
        (np.exp(1j * psi) * np.cos(theta), ModeLabel(1, k, omega, False)),
        (np.exp(1j * (psi + gamma)) * np.sin(theta), ModeLabel(2, k, omega, False)),
        (np.exp(-1j * psi) * np.cos(theta), ModeLabel(1, k, -omega, True)),
        (np.exp(-1j * (psi + gamma)) * np.sin(theta), ModeLabel(2, k, -omega, True)),
    ]


def cross_spectrum_via_wick(p: OpoParams, terms_a, terms_b) -> complex:
    """Spectral correlation of two quadrature operators from their
    frequency-component terms, using only two-operator Wick moments."""
    tot = 0.0 + 0.0j
    for ca, la in terms_a:
        for cb, lb in terms_b:
            m = wick_moment(p, [la, lb])
            if m != 0:
                tot += ca * cb * m
    return tot


@dataclass(frozen=True)
class McSecondMoments:
    n1: float
    n2: float
    c12: complex
    se_n1: float
    se_n2: float
    se_c12: float


def mc_second_moments(p: OpoParams, k: TransverseMode, omega: float,
                      n_samples: int, seed: int) -> McSecondMoments:
    """Monte-Carlo estimate of the output second moments.

    The four involved input modes are drawn as independent circular
    complex Gaussians with symmetric-ordered variance 1/2; outputs are
    formed with the transfer coefficients and the self moments converted
    to normal ordering by subtracting the half-quantum.  The stream is
    numpy's seeded PCG64, so a fixed seed reproduces bit-identical
    results.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be >= 1000")
    rng = np.random.default_rng(seed)
    scale = 0.5  # per-mode symmetric-ordered variance 1/2
    std = np.sqrt(scale / 2.0)

    def draw():
        return rng.normal(0.0, std, n_samples) + 1j * rng.normal(0.0, std, n_samples)

    a1k, a2k, a1m, a2m = draw(), draw(), draw(), draw()
    u1, v1, u2, v2 = _transfer_arrays(p, k.kx, k.ky, omega)
    u1m, v1m, u2m, v2m = _transfer_arrays(p, -k.kx, -k.ky, -omega)
    b1 = u1 * a1k + v1 * np.conj(a2m)          # field 1 at (k, w)
    b2m = u2m * a2m + v2m * np.conj(a1k)       # field 2 at (-k, -w)
    b2 = u2 * a2k + v2 * np.conj(a1m)          # field 2 at (k, w)

    i1 = np.abs(b1) ** 2
    i2 = np.abs(b2) ** 2
    cc = b1 * b2m
    n1 = i1.mean() - 0.5
    n2 = i2.mean() - 0.5
    c12 = cc.mean()
    rt = np.sqrt(n_samples)
    se_c = np.sqrt(cc.real.std(ddof=1) ** 2 + cc.imag.std(ddof=1) ** 2) / rt
    return McSecondMoments(
        n1=float(n1), n2=float(n2), c12=complex(c12),
        se_n1=float(i1.std(ddof=1) / rt), se_n2=float(i2.std(ddof=1) / rt),
        se_c12=float(se_c),
    )
