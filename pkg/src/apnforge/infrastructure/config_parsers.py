"""Campaign configuration parsers for apn-forge."""

import sys

from apnforge.exceptions import ApnForgeInfrastructureError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CAMPAIGN_TABLE = "campaign"


class ConfigParserError(ApnForgeInfrastructureError):
    """Exception raised when configuration parsing fails."""

    def __init__(self, message: str) -> None:
        """Initialize the exception.

        Args:
            message: The error message.
        """
        super().__init__(f"Config parsing error: {message}")


class TOMLCampaignConfigParser:
    """Parser for TOML campaign files with a ``[campaign]`` table."""

    def parse(self, content: str) -> dict[str, object]:
        """Parse the TOML content into the raw campaign settings.

        Args:
            content: The TOML content as a string.

        Returns:
            The key/value pairs of the ``[campaign]`` table.

        Raises:
            ConfigParserError: If the TOML is malformed or the table is missing.
        """
        try:
            parsed = tomllib.loads(content)
        except tomllib.TOMLDecodeError as e:
            raise ConfigParserError(str(e)) from e
        try:
            campaign = parsed[CAMPAIGN_TABLE]
        except KeyError as e:
            msg = f"Missing '{CAMPAIGN_TABLE}' section in TOML"
            raise ConfigParserError(msg) from e
        if not isinstance(campaign, dict):
            msg = f"'{CAMPAIGN_TABLE}' section must be a table"
            raise ConfigParserError(msg)
        return dict(campaign)
