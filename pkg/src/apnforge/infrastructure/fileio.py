"""File I/O utilities for apn-forge infrastructure."""

from pathlib import Path

from apnforge.exceptions import ApnForgeInfrastructureError


class FileReadError(ApnForgeInfrastructureError):
    """Exception raised when file reading fails."""

    def __init__(self, message: str) -> None:
        """Initialize the exception.

        Args:
            message: The error message.
        """
        super().__init__(f"File read error: {message}")


class FileWriteError(ApnForgeInfrastructureError):
    """Exception raised when file writing fails."""

    def __init__(self, message: str) -> None:
        """Initialize the exception.

        Args:
            message: The error message.
        """
        super().__init__(f"File write error: {message}")


class FileReader:
    """Utility class for reading files.

    Supposed to be used in reading not-so large files like configuration files
    and checkpoints.
    """

    def __init__(self, file_path: Path) -> None:
        """Initialize the FileReader with a file path.

        Args:
            file_path: The path to the file to read.
        """
        self.file_path = file_path

    def exists(self) -> bool:
        """Whether the file is present."""
        return self.file_path.is_file()

    def read_str(self, encoding: str) -> str:
        """Read the contents of the file.

        Args:
            encoding: The encoding to use when reading the file.

        Returns:
            The contents of the file as a string.

        Raises:
            FileReadError: If the file cannot be read.
        """
        try:
            with self.file_path.open("r", encoding=encoding) as file:
                return file.read()
        except FileNotFoundError as e:
            msg = f"File not found: {self.file_path}"
            raise FileReadError(msg) from e
        except OSError as e:
            msg = f"Cannot read file {self.file_path}: {e}"
            raise FileReadError(msg) from e


class FileWriter:
    """Utility class for writing and appending text files."""

    def __init__(self, file_path: Path) -> None:
        """Initialize the FileWriter with a file path.

        Args:
            file_path: The path to the file to write.
        """
        self.file_path = file_path

    def write_str(self, text: str, encoding: str) -> None:
        """Replace the file contents with ``text``.

        Raises:
            FileWriteError: If the file cannot be written.
        """
        self._write(text, encoding, mode="w")

    def append_str(self, text: str, encoding: str) -> None:
        """Append ``text`` and flush it to disk.

        Raises:
            FileWriteError: If the file cannot be written.
        """
        self._write(text, encoding, mode="a")

    def _write(self, text: str, encoding: str, mode: str) -> None:
        try:
            self.file_path.parent.mkdir(parents=True, exist_ok=True)
            with self.file_path.open(mode, encoding=encoding, newline="") as file:
                file.write(text)
                file.flush()
        except OSError as e:
            msg = f"Cannot write file {self.file_path}: {e}"
            raise FileWriteError(msg) from e
