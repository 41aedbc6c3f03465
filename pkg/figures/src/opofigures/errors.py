class FigureError(Exception):
    """Base class for renderer errors."""


class MissingFileError(FigureError):
    """A referenced CSV or recipe file does not exist."""


class SchemaMismatchError(FigureError):
    """CSV contents do not match the expected grid/cut layout."""


class RecipeError(FigureError):
    """Malformed recipe file."""
