from __future__ import annotations


class SincSmoothError(Exception):
    """Base class for library errors."""


class DomainError(SincSmoothError, ValueError):
    """Arguments outside an operation's domain."""


class IllPosedError(DomainError):
    """The noise characteristic function is too small to invert on the frequency box."""

    def __init__(self, message: str, *, frequency: float) -> None:
        super().__init__(f"{message} (frequency={frequency:.6g})")
        self.frequency = frequency


class DegenerateSmootherError(DomainError):
    pass


class InfiniteWidthError(DomainError):
    pass


class IngestError(DomainError):
    def __init__(self, message: str, *, row: int | None = None, column: str | None = None) -> None:
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        suffix = f" at {', '.join(location)}" if location else ""
        super().__init__(f"{message}{suffix}")
        self.row = row
        self.column = column
