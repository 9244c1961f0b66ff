"""End-to-end acceptance slices of the desk-scale campaigns."""

import json

import pytest

from tests.e2e.helpers import run_cli

BOUND_FINDINGS = {"lang-weil-interval", "betti-interval", "apn-upper-bound"}


def _campaign(kind: str, m_min: int, m_max: int) -> dict[str, object]:
    result = run_cli(
        "campaign",
        kind,
        "--m-min",
        str(m_min),
        "--m-max",
        str(m_max),
        "--threads",
        "4",
    )
    assert result.returncode == 0, result.stderr
    report: dict[str, object] = json.loads(result.stdout)
    return report


@pytest.mark.slow
@pytest.mark.parametrize(("m_min", "m_max"), [(4, 8), (9, 12)])
def test_binomial_campaign_finds_no_apn_function(m_min: int, m_max: int) -> None:
    """Test that no x^(q-2) + a x^d with d <= 29 is APN for 4 <= m <= 12."""
    report = _campaign("binomial", m_min, m_max)

    summary = report["summary"]
    assert isinstance(summary, dict)
    assert summary["apn_found"] == []
    assert summary["findings"] == []


@pytest.mark.slow
def test_deg6_campaign_finds_no_apn_function() -> None:
    """Test the full a6 x^6 + a5 x^5 + a3 x^3 grid for 4 <= m <= 7."""
    report = _campaign("deg6", 4, 7)

    summary = report["summary"]
    assert isinstance(summary, dict)
    assert summary["apn_found"] == []
    assert summary["units"] == sum(2 * 4**m - 1 for m in range(4, 8))


@pytest.mark.slow
def test_surface_census_stays_inside_the_bounds() -> None:
    """Test that the default catalog never leaves the point count intervals."""
    report = _campaign("surface-census", 2, 6)

    records = report["records"]
    assert isinstance(records, list)
    assert records
    for record in records:
        assert not BOUND_FINDINGS & set(record["findings"]), record["key"]
