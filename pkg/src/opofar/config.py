"""Flat key = value run configuration with '#' comments.

Unknown keys are rejected; missing keys fall back to the shipped
defaults (the walk-off reference parameter set: unit linewidths and
diffraction, detunings -0.25, rho1 = 0, rho2 = 1, a0 = 0.99, sigma = 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import OpoParams
from .epr import GainSetting
from .errors import ConfigError
from .gridio import AxisSpec
from .quadrature import QuadratureSpec

_FLOAT_KEYS = {
    "gamma1", "gamma2", "delta1", "delta2", "a1", "a2", "rho1", "rho2",
    "a0", "sigma", "omega_max", "rel_tol", "abs_tol",
    "kx_min", "kx_max", "ky_min", "ky_max",
    "psi_min", "psi_max", "omega_scan_min", "omega_scan_max", "psi_sum",
}
_INT_KEYS = {"kx_count", "ky_count", "psi_count", "omega_scan_count",
             "seed", "threads"}
_STR_KEYS = {"scheme", "gain", "output"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS

_DEFAULTS = {
    "gamma1": 1.0, "gamma2": 1.0, "delta1": -0.25, "delta2": -0.25,
    "a1": 1.0, "a2": 1.0, "rho1": 0.0, "rho2": 1.0, "a0": 0.99, "sigma": 1.0,
    "omega_max": 50.0, "rel_tol": 1e-8, "abs_tol": 1e-9,
    "kx_min": -1.0, "kx_max": 1.0, "ky_min": -1.0, "ky_max": 1.0,
    "kx_count": None, "ky_count": None,
    "psi_min": -np.pi / 2, "psi_max": np.pi / 2, "psi_count": 181,
    "omega_scan_min": -2.0, "omega_scan_max": 2.0, "omega_scan_count": 201,
    "psi_sum": 0.0,
    "scheme": "kh", "gain": "unit", "output": None,
    "seed": 12345, "threads": 1,
}

_SCHEMES = ("kh", "vbright", "vdark")


@dataclass
class RunConfig:
    params: OpoParams
    quadrature: QuadratureSpec
    values: dict = field(default_factory=dict)

    @property
    def threads(self) -> int:
        return self.values["threads"]

    @property
    def seed(self) -> int:
        return self.values["seed"]

    @property
    def scheme(self) -> str:
        return self.values["scheme"]

    @property
    def psi_sum(self) -> float:
        return self.values["psi_sum"]

    @property
    def output(self):
        return self.values["output"]

    def gain(self) -> GainSetting:
        text = self.values["gain"]
        if text == "unit":
            return GainSetting.unit()
        if text == "optimal":
            return GainSetting.optimal()
        try:
            return GainSetting.fixed(complex(text))
        except ValueError:
            raise ConfigError(f"gain must be 'unit', 'optimal' or a complex literal, got {text!r}")

    def k_axes(self, default_count: int):
        v = self.values
        try:
            return (AxisSpec("kx", v["kx_min"], v["kx_max"], v["kx_count"] or default_count),
                    AxisSpec("ky", v["ky_min"], v["ky_max"], v["ky_count"] or default_count))
        except ValueError as exc:
            raise ConfigError(str(exc))

    def epr_axes(self):
        v = self.values
        try:
            return (AxisSpec("psi_sum", v["psi_min"], v["psi_max"], v["psi_count"]),
                    AxisSpec("omega", v["omega_scan_min"], v["omega_scan_max"],
                             v["omega_scan_count"]))
        except ValueError as exc:
            raise ConfigError(str(exc))

    def metadata(self) -> dict:
        md = {k: self.values[k] for k in
              ("gamma1", "gamma2", "delta1", "delta2", "a1", "a2",
               "rho1", "rho2", "a0", "sigma",
               "omega_max", "rel_tol", "abs_tol", "seed")}
        return md


def parse_config(text: str) -> RunConfig:
    """Parse a key = value document into a validated RunConfig."""
    values = dict(_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw!r}", line=lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            else:
                values[key] = val
        except ValueError:
            raise ConfigError(f"cannot parse value for {key!r}: {val!r}", line=lineno)

    if values["scheme"] not in _SCHEMES:
        raise ConfigError(f"scheme must be one of {_SCHEMES}, got {values['scheme']!r}")
    if values["threads"] < 1:
        raise ConfigError("threads must be >= 1")
    for ck in ("kx_count", "ky_count"):
        if values[ck] is not None and values[ck] < 2:
            raise ConfigError(f"{ck} must be >= 2")
    try:
        params = OpoParams(
            gamma1=values["gamma1"], gamma2=values["gamma2"],
            delta1=values["delta1"], delta2=values["delta2"],
            a1=values["a1"], a2=values["a2"],
            rho1=values["rho1"], rho2=values["rho2"],
            a0=values["a0"], sigma=values["sigma"],
        )
        quad = QuadratureSpec(omega_max=values["omega_max"],
                              rel_tol=values["rel_tol"], abs_tol=values["abs_tol"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    cfg = RunConfig(params=params, quadrature=quad, values=values)
    cfg.gain()           # validate eagerly
    cfg.epr_axes()
    cfg.k_axes(2)
    return cfg
