"""Tests package for apn-forge."""
