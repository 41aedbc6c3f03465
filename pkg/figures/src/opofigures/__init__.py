"""Figure rendering for opofar CSV outputs."""

from .errors import FigureError, MissingFileError, RecipeError, SchemaMismatchError
from .recipes import FigureRecipe, load_recipe, parse_recipe
from .render import GridData, CutData, RenderResult, load_cut, load_grid, render

__version__ = "0.1.0"
