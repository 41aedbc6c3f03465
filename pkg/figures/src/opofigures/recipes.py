"""Figure recipes: the same flat key = value format the solver CLI uses.

Keys: input (CSV path; comma-separated list for line overlays),
kind (heatmap | lines), clip (optional upper display threshold),
contour (optional level for a white contour line), palette
(sequential for intensities, signed for quantities with a meaningful
zero), x_label / y_label, output (image path stem; .png and .svg are
emitted).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import RecipeError

_KNOWN = {"input", "kind", "clip", "contour", "palette",
          "x_label", "y_label", "title", "output"}


@dataclass
class FigureRecipe:
    inputs: list[str]
    kind: str = "heatmap"
    clip: float | None = None
    contour: float | None = None
    palette: str = "sequential"
    x_label: str = ""
    y_label: str = ""
    title: str = ""
    output: str = "figure"

    def __post_init__(self):
        if self.kind not in ("heatmap", "lines"):
            raise RecipeError(f"kind must be heatmap or lines, got {self.kind!r}")
        if self.palette not in ("sequential", "signed"):
            raise RecipeError(f"palette must be sequential or signed, got {self.palette!r}")
        if not self.inputs:
            raise RecipeError("at least one input CSV is required")


def parse_recipe(text: str, base_dir: Path | None = None) -> FigureRecipe:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise RecipeError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _KNOWN:
            raise RecipeError(f"line {lineno}: unknown key {key!r}")
        values[key] = val
    if "input" not in values:
        raise RecipeError("recipe must name an input CSV")
    inputs = [s.strip() for s in values.pop("input").split(",") if s.strip()]
    if base_dir is not None:
        inputs = [str(base_dir / s) if not Path(s).is_absolute() else s for s in inputs]
        if "output" in values and not Path(values["output"]).is_absolute():
            values["output"] = str(base_dir / values["output"])
    for key in ("clip", "contour"):
        if key in values:
            try:
                values[key] = float(values[key])
            except ValueError:
                raise RecipeError(f"{key} must be a number, got {values[key]!r}")
    return FigureRecipe(inputs=inputs, **values)


def load_recipe(path) -> FigureRecipe:
    path = Path(path)
    if not path.exists():
        from .errors import MissingFileError
        raise MissingFileError(f"recipe not found: {path}")
    return parse_recipe(path.read_text(), base_dir=path.parent)
