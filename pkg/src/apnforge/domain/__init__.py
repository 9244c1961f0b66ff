"""Domain layer for apn-forge."""
