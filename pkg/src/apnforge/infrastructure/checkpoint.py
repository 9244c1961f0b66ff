"""Append-only JSON-lines checkpoints for campaigns.

Layout: one header line carrying the campaign id, one line per finished
unit, and a final seal line with the summary. A torn last line (from a crash
mid-write) is dropped on load, and a file left without a complete header
starts over. Any other malformed line is an error.
"""

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from apnforge.domain.campaign import (
    REPORT_SCHEMA,
    CampaignSummary,
    UnitRecord,
    canonical_json,
)
from apnforge.exceptions import ApnForgeInfrastructureError
from apnforge.infrastructure.fileio import FileReader, FileWriter

logger = logging.getLogger(__name__)

ENCODING = "utf-8"


class CheckpointError(ApnForgeInfrastructureError):
    """Exception raised when a checkpoint cannot be used."""

    def __init__(self, message: str) -> None:
        """Initialize the exception.

        Args:
            message: The error message.
        """
        super().__init__(f"Checkpoint error: {message}")


class JsonlCheckpointStore:
    """Checkpoint store backed by a single JSON-lines file."""

    def __init__(self, file_path: Path) -> None:
        """Initialize the store.

        Args:
            file_path: Location of the checkpoint file.
        """
        self.file_path = file_path
        self.reader = FileReader(file_path)
        self.writer = FileWriter(file_path)
        self.sealed = False

    def _line(self, payload: dict[str, object]) -> str:
        return canonical_json(payload) + "\n"

    def _start(self, campaign_id: str) -> None:
        header = {"type": "header", "campaign_id": campaign_id, "schema": REPORT_SCHEMA}
        self.writer.write_str(self._line(header), ENCODING)

    def load(self, campaign_id: str) -> list[UnitRecord]:
        """Restore finished units, starting a new file when none exists.

        An empty file, or one holding only a torn header, also starts fresh.

        Raises:
            CheckpointError: If the file belongs to another campaign or a
                line other than the last is malformed.
        """
        if not self.reader.exists():
            self._start(campaign_id)
            return []
        lines = self.reader.read_str(ENCODING).splitlines()
        entries: list[dict[str, object]] = []
        for index, line in enumerate(lines):
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as e:
                if index == len(lines) - 1:
                    logger.warning("dropping torn last line of %s", self.file_path)
                    break
                msg = f"{self.file_path}: malformed line {index + 1}"
                raise CheckpointError(msg) from e
            entries.append(entry)
        if not entries:
            logger.warning("%s has no complete header, starting fresh", self.file_path)
            self._start(campaign_id)
            return []
        if entries[0].get("type") != "header":
            msg = f"{self.file_path}: missing header"
            raise CheckpointError(msg)
        found = entries[0].get("campaign_id")
        if found != campaign_id:
            msg = f"{self.file_path} belongs to campaign {found}, not {campaign_id}"
            raise CheckpointError(msg)
        records: list[UnitRecord] = []
        try:
            for entry in entries[1:]:
                if entry.get("type") == "unit":
                    records.append(UnitRecord.model_validate(entry["record"]))
                elif entry.get("type") == "seal":
                    self.sealed = True
        except (KeyError, ValidationError) as e:
            msg = f"{self.file_path}: invalid unit record: {e}"
            raise CheckpointError(msg) from e
        if len(entries) < len(lines):
            self.writer.write_str("".join(self._line(e) for e in entries), ENCODING)
        logger.info("restored %d units from %s", len(records), self.file_path)
        return records

    def append(self, record: UnitRecord) -> None:
        """Persist one finished unit."""
        self.writer.append_str(
            self._line({"type": "unit", "record": record.model_dump(mode="json")}),
            ENCODING,
        )

    def seal(self, summary: CampaignSummary) -> None:
        """Write the summary line once."""
        if self.sealed:
            return
        self.writer.append_str(
            self._line({"type": "seal", "summary": summary.model_dump(mode="json")}),
            ENCODING,
        )
        self.sealed = True
