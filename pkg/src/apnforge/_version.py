"""Version information for apn-forge."""

__version__ = "0.1.0"
