"""Test suite for campaign report writers."""

import csv
import io
import json

from apnforge.domain.campaign import (
    CampaignKind,
    CampaignReport,
    CampaignSummary,
    OutputFormat,
    UnitRecord,
    Verdict,
)
from apnforge.infrastructure.report_writers import (
    CSV_COLUMNS,
    CsvReportWriter,
    JsonReportWriter,
    writer_for,
)


def _report() -> CampaignReport:
    records = (
        UnitRecord(
            key="binomial/m=5/d=3/a=1",
            kind=CampaignKind.BINOMIAL,
            m=5,
            g="x^3",
            verdict=Verdict.APN,
            delta=2,
            findings=("apn-hit",),
        ),
        UnitRecord(
            key="binomial/m=5/d=5/a=1",
            kind=CampaignKind.BINOMIAL,
            m=5,
            g="x^5",
            verdict=Verdict.NOT_APN,
        ),
    )
    return CampaignReport(
        campaign_id="0123456789abcdef",
        kind=CampaignKind.BINOMIAL,
        config={"m_min": 5},
        records=records,
        summary=CampaignSummary(
            units=2,
            apn_found=(records[0].key,),
            findings=(records[0].key,),
            skipped=(),
            orbit_counts=(),
        ),
    )


def test_json_writer_uses_schema_alias() -> None:
    """Test that the JSON report carries the schema tag and every record."""
    data = json.loads(JsonReportWriter().render(_report()))

    assert data["schema"] == "apn-forge/1"
    assert "schema_" not in data
    assert [r["verdict"] for r in data["records"]] == ["apn", "not-apn"]


def test_json_writer_is_deterministic() -> None:
    """Test that rendering twice gives identical text."""
    assert JsonReportWriter().render(_report()) == JsonReportWriter().render(
        _report()
    )


def test_csv_writer_emits_one_row_per_record() -> None:
    """Test the CSV header and row contents."""
    text = CsvReportWriter().render(_report())
    rows = list(csv.reader(io.StringIO(text)))

    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1] == ["binomial/m=5/d=3/a=1", "5", "x^3", "apn", "2", "apn-hit"]
    assert rows[2] == ["binomial/m=5/d=5/a=1", "5", "x^5", "not-apn", "", ""]


def test_writer_for_selects_format() -> None:
    """Test that the factory matches the output format."""
    assert isinstance(writer_for(OutputFormat.CSV), CsvReportWriter)
    assert isinstance(writer_for(OutputFormat.JSON), JsonReportWriter)
