"""End-to-end tests for basic CLI functionality."""

import json
import re

from tests.e2e.helpers import run_cli


def test_apn_forge_prints_version() -> None:
    """Test that apn-forge prints the version."""
    result = run_cli("--version", check=True)
    assert re.match(r"^\d+\.\d+\.\d+$", result.stdout.strip())


def test_field_info_prints_json() -> None:
    """Test that 'field info' describes GF(2^8)."""
    result = run_cli("field", "info", "-m", "8", check=True)

    info = json.loads(result.stdout)
    assert info["q"] == 256
    assert info["red_poly"] == "0x11b"


def test_apn_check_of_cube() -> None:
    """Test that x^3 is APN over GF(8) with the first witness."""
    result = run_cli("apn", "check", "x^3", "-m", "3", "--plain", check=True)

    report = json.loads(result.stdout)["report"]
    assert report == {"delta": 2, "witness_a": 1, "witness_b": 1, "is_apn": True}


def test_apn_spectrum_of_inverse_over_gf16() -> None:
    """Test that x^(q-2) alone has differential uniformity 4 for even m."""
    result = run_cli("apn", "spectrum", "0", "-m", "4", check=True)

    spectrum = {int(k): v for k, v in json.loads(result.stdout)["spectrum"].items()}
    assert max(spectrum) == 4
    assert sum(spectrum.values()) == 15 * 16


def test_surface_count_of_cube() -> None:
    """Test the projective count of the cube surface over GF(8)."""
    result = run_cli("surface", "count", "x^3", "-m", "3", check=True)

    report = json.loads(result.stdout)
    assert report["infinity_count"] == 30
    assert report["projective_count"] == report["affine_count"] + 30


def test_bounds_crossover_prints_integer() -> None:
    """Test that 'bounds crossover' prints the smallest exponent."""
    result = run_cli("bounds", "crossover", "-d", "5", check=True)
    assert result.stdout == "17\n"


def test_invalid_polynomial_exits_with_error() -> None:
    """Test that bad input exits 1 with a message on stderr only."""
    result = run_cli("apn", "check", "x^3-x", "-m", "3")

    assert result.returncode == 1
    assert result.stdout == ""
    assert "Cannot parse polynomial" in result.stderr


def test_no_subcommand_prints_help() -> None:
    """Test that running without a subcommand prints usage and exits 1."""
    result = run_cli()

    assert result.returncode == 1
    assert "usage" in result.stdout
