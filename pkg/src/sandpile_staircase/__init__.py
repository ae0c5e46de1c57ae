"""sandpile-staircase - Counting, generation and sampling of sand pile and ice pile configurations."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("sandpile-staircase")
except PackageNotFoundError:
    __version__ = "0.0.0-dev"
