"""Standard I/O handling for apn-forge.

stdout carries only command results; diagnostics go to stderr.
"""

import sys


def write_stdout(text: str) -> None:
    """Write a result to stdout, newline-terminated.

    Args:
        text: The text to write to stdout.
    """
    sys.stdout.write(text if text.endswith("\n") else f"{text}\n")
    sys.stdout.flush()


def write_stderr(text: str) -> None:
    """Write a diagnostic line to stderr.

    Args:
        text: The text to write to stderr.
    """
    sys.stderr.write(text if text.endswith("\n") else f"{text}\n")
    sys.stderr.flush()
