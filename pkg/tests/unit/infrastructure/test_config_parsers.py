"""Test suite for campaign config parsers."""

import pytest

from apnforge.infrastructure.config_parsers import (
    ConfigParserError,
    TOMLCampaignConfigParser,
)


def test_parse_valid_campaign_table() -> None:
    """Test parsing a [campaign] table."""
    toml_content = """
[campaign]
kind = "deg6"
m_min = 3
m_max = 5
a3 = [0, 1]
seed = 7
"""
    parser = TOMLCampaignConfigParser()
    settings = parser.parse(toml_content)

    assert settings == {"kind": "deg6", "m_min": 3, "m_max": 5, "a3": [0, 1], "seed": 7}


def test_parse_ignores_other_tables() -> None:
    """Test that only the campaign table is returned."""
    toml_content = """
[tool]
name = "other"

[campaign]
m_min = 2
"""
    settings = TOMLCampaignConfigParser().parse(toml_content)

    assert settings == {"m_min": 2}


def test_parse_invalid_toml_raises_error() -> None:
    """Test that malformed TOML raises ConfigParserError."""
    with pytest.raises(ConfigParserError) as exc_info:
        TOMLCampaignConfigParser().parse("[campaign\nm_min = ")

    assert "Config parsing error" in str(exc_info.value)


def test_parse_missing_table_raises_error() -> None:
    """Test that a file without [campaign] raises ConfigParserError."""
    with pytest.raises(ConfigParserError) as exc_info:
        TOMLCampaignConfigParser().parse('title = "nothing"\n')

    assert "Missing 'campaign' section" in str(exc_info.value)


def test_parse_non_table_campaign_raises_error() -> None:
    """Test that campaign must be a table."""
    with pytest.raises(ConfigParserError):
        TOMLCampaignConfigParser().parse('campaign = "deg6"\n')
