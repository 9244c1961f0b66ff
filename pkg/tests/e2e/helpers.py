"""Helpers for end-to-end tests."""

import subprocess

COMMAND = "apn-forge"


def run_cli(*args: str, check: bool = False) -> subprocess.CompletedProcess[str]:
    """Run the installed apn-forge entry point and capture its output."""
    return subprocess.run(
        [COMMAND, *args],
        capture_output=True,
        text=True,
        check=check,
    )
