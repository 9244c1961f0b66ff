"""Infrastructure layer for apn-forge."""
