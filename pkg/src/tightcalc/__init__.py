"""Tight closure and phantom depth in prime characteristic, computed with certificates."""

from ._version import __version__
from .errors import TightCalcError

__all__ = ["__version__", "TightCalcError"]
