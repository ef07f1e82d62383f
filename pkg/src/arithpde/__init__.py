"""Arithmetic differential operators on q-series over p-adic rings."""

from .padic import DomainError, PadicContext, PadicNum, PrecisionError, Weight
from .qseries import QSeries

__all__ = ["DomainError", "PadicContext", "PadicNum", "PrecisionError", "QSeries", "Weight"]
__version__ = "0.1.0"
