"""Command-line interface: config parsing, subcommand dispatch, parallel
grid execution and CSV emission.

Exit codes: 0 success, 1 validation failure, 2 usage/config error,
3 numerical-convergence failure.
"""
from __future__ import annotations

import argparse
import sys
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .core import TransverseMode, critical_points, hopf_frequency
from .correlators import farfield_intensity
from .epr import GainSetting, epr_scan, scheme_detection_point, scheme_selection, variance_over_grid
from .errors import ConfigError, NoInstabilityError, OpofarError, QuadratureConvergenceError
from .gridio import ScanGrid, map_grid, map_grid_values, write_cut_csv, write_grid_csv
from .stokes import _pair_integrals
from .validate import run_validation

SUBCOMMANDS = ("farfield", "critical-points", "epr-scan", "epr-cut",
               "stokes-map", "stokes-corr", "validate")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="opofar",
        description="Below-threshold type-II OPO far-field statistics")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("-c", "--config", type=Path, default=None,
                        help="key = value config file")
        sp.add_argument("-o", "--output", type=Path, default=None,
                        help="output CSV path (overrides config)")
        sp.add_argument("--threads", type=int, default=None)
    return ap


def _load_config(args) -> RunConfig:
    text = ""
    if args.config is not None:
        text = Path(args.config).read_text()
    cfg = parse_config(text)
    if args.output is not None:
        cfg.values["output"] = str(args.output)
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("threads must be >= 1")
        cfg.values["threads"] = args.threads
    return cfg


def _out_path(cfg: RunConfig, default_name: str) -> Path:
    return Path(cfg.output) if cfg.output else Path(default_name)


def _farfield_value(p, q, kx, ky):
    return farfield_intensity(p, TransverseMode(kx, ky), q)


def _stokes_pixel_values(p, q, mask_tol, kx, ky):
    """(s0, s1, p2, normal-ordered g1/shot, g23/shot) at one pixel."""
    vals = _pair_integrals(p, TransverseMode(kx, ky), q)
    s0 = p.sigma / (2 * np.pi) * vals[8]
    s1 = p.sigma / (2 * np.pi) * vals[10]
    sig2 = p.sigma ** 2 / (2 * np.pi)
    shot = sig2 * vals[8]
    if s0 < mask_tol:
        return (s0, s1, np.nan, np.nan, np.nan)
    return (s0, s1, abs(s1) / s0,
            (sig2 * vals[0] - shot) / shot,
            (sig2 * vals[4] - shot) / shot)


def _stokes_pair_values(p, q, mask_tol, kx, ky):
    """(normal-ordered d1/shot2, d23/shot2) at one pixel pair."""
    vals = _pair_integrals(p, TransverseMode(kx, ky), q)
    sig2 = p.sigma ** 2 / (2 * np.pi)
    shot2 = sig2 * (vals[8] + vals[9])
    if shot2 < mask_tol:
        return (np.nan, np.nan)
    d1 = sig2 * (vals[0] + vals[1] + vals[2] + vals[3])
    d23 = sig2 * (vals[4] + vals[5] - vals[6] - vals[7])
    return ((d1 - shot2) / shot2, (d23 - shot2) / shot2)


class _Component:
    """Adapter selecting one component of a tuple-valued pixel function."""

    def __init__(self, func, index):
        self.func = func
        self.index = index

    def __call__(self, x, y):
        return self.func(x, y)[self.index]


def _run_farfield(cfg: RunConfig) -> int:
    ax, ay = cfg.k_axes(default_count=128)
    func = partial(_farfield_value, cfg.params, cfg.quadrature)
    grid = map_grid(func, ax, ay, threads=cfg.threads)
    out = _out_path(cfg, "farfield.csv")
    write_grid_csv(grid, out, "intensity", cfg.metadata())
    print(f"wrote {out}")
    return 0


def _run_critical_points(cfg: RunConfig) -> int:
    cp = critical_points(cfg.params)
    wh = hopf_frequency(cfg.params, cp.k_v)
    print(f"k_H = ({cp.k_h.kx:.6f}, {cp.k_h.ky:.6f})")
    print(f"k_V = ({cp.k_v.kx:.6f}, {cp.k_v.ky:.6f})")
    print(f"ky_plus = {cp.ky_plus:.6f}")
    print(f"ky_minus = {cp.ky_minus:.6f}")
    print(f"omega_H(k_V) = {wh:.6f}")
    if cfg.output:
        rows = [("kx_c", cp.k_h.kx), ("ky_external", cp.k_v.ky),
                ("ky_plus", cp.ky_plus), ("ky_minus", cp.ky_minus),
                ("omega_h_at_kv", wh)]
        with open(cfg.output, "w") as fh:
            fh.write("# " + " ".join(f"{k}={v}" for k, v in cfg.metadata().items()) + "\n")
            fh.write("name,value\n")
            for name, val in rows:
                fh.write(f"{name},{val:.17g}\n")
        print(f"wrote {cfg.output}")
    return 0


def _run_epr_scan(cfg: RunConfig) -> int:
    psi_axis, om_axis = cfg.epr_axes()
    grid = epr_scan(cfg.params, cfg.scheme, cfg.gain(), psi_axis, om_axis)
    out = _out_path(cfg, f"epr_{cfg.scheme}.csv")
    md = cfg.metadata()
    md.update(scheme=cfg.scheme, gain=cfg.values["gain"])
    write_grid_csv(grid, out, "v_over_sigma", md)
    print(f"wrote {out}")
    return 0


def _run_epr_cut(cfg: RunConfig) -> int:
    _, om_axis = cfg.epr_axes()
    oms = om_axis.points()
    phi = scheme_selection(cfg.scheme)
    k = scheme_detection_point(cfg.params, cfg.scheme)
    psi = np.array([cfg.psi_sum])
    v1 = variance_over_grid(cfg.params, k, phi, GainSetting.unit(), psi, oms)[0]
    vg = variance_over_grid(cfg.params, k, phi, GainSetting.optimal(), psi, oms)[0]
    stem = _out_path(cfg, f"epr_cut_{cfg.scheme}.csv")
    md = cfg.metadata()
    md.update(scheme=cfg.scheme, psi_sum=cfg.psi_sum)
    p1 = stem.with_name(stem.stem + "_g1.csv")
    pg = stem.with_name(stem.stem + "_gopt.csv")
    write_cut_csv(p1, "omega", "v_over_sigma", oms, v1, dict(md, gain="unit"))
    write_cut_csv(pg, "omega", "v_over_sigma", oms, vg, dict(md, gain="optimal"))
    print(f"wrote {p1}\nwrote {pg}")
    return 0


def _emit_components(cfg, func, names, axes, stem):
    ax, ay = axes
    arr = map_grid_values(func, ax, ay, threads=cfg.threads)
    written = []
    for idx, name in enumerate(names):
        grid = ScanGrid(x_axis=ax, y_axis=ay, values=arr[..., idx])
        path = stem.with_name(stem.stem + f"_{name}.csv")
        write_grid_csv(grid, path, name, cfg.metadata())
        written.append(path)
    return written


def _run_stokes_map(cfg: RunConfig) -> int:
    axes = cfg.k_axes(default_count=64)
    func = partial(_stokes_pixel_values, cfg.params, cfg.quadrature,
                   cfg.quadrature.abs_tol)
    stem = _out_path(cfg, "stokes_map.csv")
    written = _emit_components(cfg, func, ("s0", "s1", "p2", "g1self", "g23self"),
                               axes, stem)
    print("\n".join(f"wrote {p}" for p in written))
    return 0


def _run_stokes_corr(cfg: RunConfig) -> int:
    axes = cfg.k_axes(default_count=64)
    func = partial(_stokes_pair_values, cfg.params, cfg.quadrature,
                   cfg.quadrature.abs_tol)
    stem = _out_path(cfg, "stokes_corr.csv")
    written = _emit_components(cfg, func, ("d1", "d23"), axes, stem)
    print("\n".join(f"wrote {p}" for p in written))
    return 0


def _run_validate(cfg: RunConfig) -> int:
    checks = run_validation(cfg.params, cfg.quadrature, seed=cfg.seed)
    width = max(len(c.name) for c in checks)
    lines = []
    for c in checks:
        status = "PASS" if c.ok else "FAIL"
        print(f"{c.name:<{width}}  {status}  measured={c.measured:.3e}  bound={c.bound:.3e}")
        lines.append(f"{c.name},{status},{c.measured:.17g},{c.bound:.17g}")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write("name,status,measured,bound\n")
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {cfg.output}")
    n_fail = sum(not c.ok for c in checks)
    print(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return 1 if n_fail else 0


_RUNNERS = {
    "farfield": _run_farfield,
    "critical-points": _run_critical_points,
    "epr-scan": _run_epr_scan,
    "epr-cut": _run_epr_cut,
    "stokes-map": _run_stokes_map,
    "stokes-corr": _run_stokes_corr,
    "validate": _run_validate,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _load_config(args)
        return _RUNNERS[args.command](cfg)
    except (ConfigError, NoInstabilityError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 3
    except OpofarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
