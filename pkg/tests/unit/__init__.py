"""Unit tests package for apn-forge."""
