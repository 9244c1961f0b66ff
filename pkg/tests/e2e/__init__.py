"""End-to-end tests package for apn-forge."""
