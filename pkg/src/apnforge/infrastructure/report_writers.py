"""Report renderers: JSON (full) and CSV (one row per unit)."""

import csv
import io
import json
from typing import Protocol

from apnforge.domain.campaign import CampaignReport, OutputFormat

CSV_COLUMNS = ("key", "m", "g", "verdict", "delta", "findings")


class ReportWriter(Protocol):
    """Protocol for rendering a campaign report to text."""

    def render(self, report: CampaignReport) -> str:
        """Render the report."""


class JsonReportWriter:
    """Indented JSON with the schema tag first."""

    def render(self, report: CampaignReport) -> str:
        """Render the report as JSON."""
        data = report.model_dump(mode="json", by_alias=True)
        return json.dumps(data, indent=2) + "\n"


class CsvReportWriter:
    """Flat CSV of unit records; findings are ``;``-joined."""

    def render(self, report: CampaignReport) -> str:
        """Render the report records as CSV."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in report.records:
            writer.writerow(
                (
                    record.key,
                    record.m,
                    record.g,
                    record.verdict.value,
                    "" if record.delta is None else record.delta,
                    ";".join(record.findings),
                )
            )
        return buffer.getvalue()


def writer_for(output_format: OutputFormat) -> ReportWriter:
    """Writer matching ``output_format``."""
    if output_format is OutputFormat.CSV:
        return CsvReportWriter()
    return JsonReportWriter()
