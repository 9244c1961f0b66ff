"""E2E test configuration and fixtures."""

from pathlib import Path

import pytest


@pytest.fixture
def deg6_config(tmp_path: Path) -> Path:
    """Small deg6 campaign file over GF(4) and GF(8).

    Returns:
        Path of the TOML file.
    """
    config_path = tmp_path / "deg6.toml"
    config_path.write_text(
        """
[campaign]
kind = "deg6"
m_min = 2
m_max = 3
a3 = [0, 1]
""",
        encoding="utf-8",
    )
    return config_path
