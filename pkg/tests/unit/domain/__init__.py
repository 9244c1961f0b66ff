"""Unit tests for the domain package."""
