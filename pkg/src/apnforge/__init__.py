"""apn-forge: APN checks, surface point counts and bounds for x^(q-2)+g(x)."""

from apnforge._version import __version__
from apnforge.cli import main

__all__ = ["__version__", "main"]
