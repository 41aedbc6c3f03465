"""Deterministic rendering of solver CSVs to PNG + SVG.

The renderer never alters the data: the grid placed on the axes is the
CSV's value column reshaped onto its axes, with display-only masking for
clipped cells.  Identical inputs produce byte-identical image files.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .errors import MissingFileError, SchemaMismatchError
from .recipes import FigureRecipe

matplotlib.rcParams["svg.hashsalt"] = "opofar-figures"

_PALETTES = {"sequential": "magma", "signed": "RdBu_r"}


@dataclass
class GridData:
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray          # shape (len(xs), len(ys)), NaN = masked
    x_name: str
    y_name: str
    quantity: str


@dataclass
class CutData:
    xs: np.ndarray
    values: np.ndarray
    x_name: str
    quantity: str
    label: str


@dataclass
class RenderResult:
    """What was drawn: the untouched data plus the emitted files."""

    grids: list = field(default_factory=list)
    cuts: list = field(default_factory=list)
    display: np.ndarray | None = None     # masked array actually shown
    contour_level: float | None = None
    paths: list = field(default_factory=list)


def _read_rows(path: Path):
    if not path.exists():
        raise MissingFileError(f"input CSV not found: {path}")
    lines = [ln.rstrip("\n") for ln in path.read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise SchemaMismatchError(f"{path}: no data rows")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    widths = {len(r) for r in rows}
    if widths != {len(header)}:
        raise SchemaMismatchError(f"{path}: ragged rows")
    try:
        data = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise SchemaMismatchError(f"{path}: non-numeric cell ({exc})")
    return header, data


def load_grid(path) -> GridData:
    """Load a long-format x,y,value grid CSV."""
    header, data = _read_rows(Path(path))
    if len(header) != 3:
        raise SchemaMismatchError(f"{path}: expected 3 columns, got {len(header)}")
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    if len(xs) * len(ys) != len(data):
        raise SchemaMismatchError(f"{path}: rows do not fill the grid")
    values = np.full((len(xs), len(ys)), np.nan)
    xi = np.searchsorted(xs, data[:, 0])
    yi = np.searchsorted(ys, data[:, 1])
    values[xi, yi] = data[:, 2]
    return GridData(xs, ys, values, header[0], header[1], header[2])


def load_cut(path) -> CutData:
    """Load a two-column x,value cut CSV."""
    header, data = _read_rows(Path(path))
    if len(header) != 2:
        raise SchemaMismatchError(f"{path}: expected 2 columns, got {len(header)}")
    return CutData(data[:, 0], data[:, 1], header[0], header[1],
                   label=Path(path).stem)


def _save(fig, stem: str) -> list[Path]:
    paths = []
    for ext, metadata in ((".png", {}), (".svg", {"Date": None})):
        out = Path(stem).with_suffix(ext)
        fig.savefig(out, metadata=metadata)
        paths.append(out)
    return paths


def _render_heatmap(recipe: FigureRecipe) -> RenderResult:
    grid = load_grid(recipe.inputs[0])
    shown = np.ma.masked_invalid(grid.values)
    if recipe.clip is not None:
        shown = np.ma.masked_greater(shown, recipe.clip)
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    mesh = ax.pcolormesh(grid.xs, grid.ys, shown.T,
                         cmap=_PALETTES[recipe.palette], shading="nearest")
    if recipe.palette == "signed":
        bound = float(np.nanmax(np.abs(grid.values))) or 1.0
        mesh.set_clim(-bound, bound)
    level = None
    if recipe.contour is not None:
        level = float(recipe.contour)
        ax.contour(grid.xs, grid.ys, grid.values.T, levels=[level],
                   colors="white", linewidths=1.2)
    fig.colorbar(mesh, ax=ax, label=grid.quantity)
    ax.set_xlabel(recipe.x_label or grid.x_name)
    ax.set_ylabel(recipe.y_label or grid.y_name)
    if recipe.title:
        ax.set_title(recipe.title)
    paths = _save(fig, recipe.output)
    plt.close(fig)
    return RenderResult(grids=[grid], display=shown, contour_level=level,
                        paths=paths)


def _render_lines(recipe: FigureRecipe) -> RenderResult:
    cuts = [load_cut(path) for path in recipe.inputs]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for cut in cuts:
        ax.plot(cut.xs, cut.values, label=cut.label)
    ax.set_xlabel(recipe.x_label or cuts[0].x_name)
    ax.set_ylabel(recipe.y_label or cuts[0].quantity)
    if recipe.title:
        ax.set_title(recipe.title)
    if len(cuts) > 1:
        ax.legend()
    paths = _save(fig, recipe.output)
    plt.close(fig)
    return RenderResult(cuts=cuts, paths=paths)


def render(recipe: FigureRecipe) -> RenderResult:
    """Render one recipe; emits <output>.png and <output>.svg."""
    if recipe.kind == "heatmap":
        return _render_heatmap(recipe)
    return _render_lines(recipe)
