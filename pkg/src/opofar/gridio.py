"""Rectangular sweep grids and their CSV form.

CSV layout: one '#'-prefixed metadata line holding the full parameter
set, a header row naming the axes and quantity, then long-format rows
x,y,value (or x,value for one-dimensional cuts) at 17 significant
digits so parsing returns the exact binary values.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FMT = "%.17g"


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"axis {self.name}: count must be >= 2")
        if not self.lo < self.hi:
            raise ValueError(f"axis {self.name}: min must be < max")

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class ScanGrid:
    """Row-major result matrix: values[i, j] belongs to
    (x_axis.points()[i], y_axis.points()[j]).  NaN marks masked cells."""

    x_axis: AxisSpec
    y_axis: AxisSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, float)
        if self.values.shape != (self.x_axis.count, self.y_axis.count):
            raise ValueError("values shape does not match the axis counts")


def _meta_line(metadata: dict) -> str:
    parts = [f"{k}={v}" for k, v in metadata.items()]
    return "# " + " ".join(parts)


def write_grid_csv(grid: ScanGrid, path, quantity: str, metadata: dict) -> None:
    xs = grid.x_axis.points()
    ys = grid.y_axis.points()
    with open(path, "w") as fh:
        fh.write(_meta_line(metadata) + "\n")
        fh.write(f"{grid.x_axis.name},{grid.y_axis.name},{quantity}\n")
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                v = grid.values[i, j]
                sv = "nan" if np.isnan(v) else FMT % v
                fh.write(f"{FMT % x},{FMT % y},{sv}\n")


def read_grid_csv(path):
    """Inverse of write_grid_csv: (ScanGrid, metadata, quantity)."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing metadata line")
    metadata = {}
    for part in lines[0][1:].split():
        if "=" in part:
            key, val = part.split("=", 1)
            metadata[key] = val
    header = lines[1].split(",")
    if len(header) != 3:
        raise ValueError(f"{path}: expected 3-column grid CSV")
    xn, yn, quantity = header
    xs, ys, vs = [], [], []
    for ln in lines[2:]:
        if not ln:
            continue
        a, b, c = ln.split(",")
        xs.append(float(a))
        ys.append(float(b))
        vs.append(float(c))
    ux = sorted(set(xs))
    uy = sorted(set(ys))
    grid = ScanGrid(
        x_axis=AxisSpec(xn, ux[0], ux[-1], len(ux)),
        y_axis=AxisSpec(yn, uy[0], uy[-1], len(uy)),
        values=np.array(vs).reshape(len(ux), len(uy)),
    )
    return grid, metadata, quantity


def write_cut_csv(path, x_name: str, quantity: str, xs, values, metadata: dict) -> None:
    with open(path, "w") as fh:
        fh.write(_meta_line(metadata) + "\n")
        fh.write(f"{x_name},{quantity}\n")
        for x, v in zip(xs, values):
            sv = "nan" if np.isnan(v) else FMT % v
            fh.write(f"{FMT % x},{sv}\n")


def map_grid_values(func, x_axis: AxisSpec, y_axis: AxisSpec, threads: int = 1) -> np.ndarray:
    """Evaluate func(x, y) over the grid; rows are dispatched to a
    process pool when threads > 1 and reassembled by index, so the
    thread count never changes the emitted values.  Returns an array of
    shape (x_count, y_count) plus func's own trailing shape."""
    xs = x_axis.points()
    ys = y_axis.points()
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_RowWorker(func, ys), xs))
    else:
        rows = [_RowWorker(func, ys)(x) for x in xs]
    return np.array(rows, dtype=float)


def map_grid(func, x_axis: AxisSpec, y_axis: AxisSpec, threads: int = 1) -> ScanGrid:
    """map_grid_values for scalar-valued func, wrapped as a ScanGrid."""
    values = map_grid_values(func, x_axis, y_axis, threads)
    return ScanGrid(x_axis=x_axis, y_axis=y_axis, values=values)


class _RowWorker:
    """Picklable row evaluator for the process pool."""

    def __init__(self, func, ys):
        self.func = func
        self.ys = ys

    def __call__(self, x):
        return [self.func(x, y) for y in self.ys]
