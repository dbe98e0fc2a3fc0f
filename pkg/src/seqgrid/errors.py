"""Exception hierarchy shared across the package.

Everything raised on bad input data derives from SeqGridError so the CLI
can map it to a single "data error" exit code.
"""


class SeqGridError(Exception):
    pass


class InvalidBaseError(SeqGridError):
    """A character that is not a valid IUPAC nucleotide code."""

    def __init__(self, char: str, position: int):
        super().__init__(f"invalid nucleotide {char!r} at position {position}")
        self.char = char
        self.position = position


class DataFormatError(SeqGridError):
    """Malformed record file; carries the offending line number when known."""

    def __init__(self, message: str, path: str = "", line: int | None = None):
        where = f"{path}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + message)
        self.path = path
        self.line = line


class ArchiveFormatError(SeqGridError):
    """Tensor archive bytes or sidecar manifest do not match the format."""
