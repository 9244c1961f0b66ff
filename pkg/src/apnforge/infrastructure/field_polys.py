"""Reduction polynomial override files.

One ``m:hex`` pair per line, e.g. ``8:11b``. Blank lines and ``#`` comments
are ignored.
"""

from apnforge.domain.gf2m import FieldConstructionError, new_field
from apnforge.exceptions import ApnForgeInfrastructureError


class FieldPolyFileError(ApnForgeInfrastructureError):
    """Exception raised when a field polynomial file is malformed."""

    def __init__(self, line_number: int, message: str) -> None:
        """Initialize the exception.

        Args:
            line_number: 1-based line of the offending entry.
            message: The error message.
        """
        super().__init__(f"Field polynomial file, line {line_number}: {message}")
        self.line_number = line_number


class FieldPolyParser:
    """Parser for ``m:hex`` reduction polynomial overrides."""

    def parse(self, content: str) -> dict[int, int]:
        r"""Parse and validate every entry.

        Returns:
            Mapping from extension degree to reduction polynomial.

        Raises:
            FieldPolyFileError: On syntax errors, duplicate degrees or
                polynomials that do not define a field.

        Examples:
            >>> FieldPolyParser().parse("# AES field\n8:11b\n")
            {8: 283}
        """
        result: dict[int, int] = {}
        for line_number, raw in enumerate(content.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m_text, sep, poly_text = line.partition(":")
            if not sep:
                msg = f"expected 'm:hex', got {line!r}"
                raise FieldPolyFileError(line_number, msg)
            try:
                m = int(m_text.strip())
                poly = int(poly_text.strip().removeprefix("0x"), 16)
            except ValueError as e:
                raise FieldPolyFileError(line_number, str(e)) from e
            if m in result:
                raise FieldPolyFileError(line_number, f"duplicate entry for m={m}")
            try:
                new_field(m, poly)
            except FieldConstructionError as e:
                raise FieldPolyFileError(line_number, str(e)) from e
            result[m] = poly
        return result
