"""CSV in and out.

One schema everywhere: a header row, predictor columns x1..xd, a y column for
labeled data. Markov series use the x columns in time order. "-" stands for
standard input or output.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.types import LabeledSample, MarkovSeries, SampleMatrix
from sincsmooth.errors import IngestError

STDIO = "-"


@dataclass(frozen=True, slots=True, eq=False)
class Table:
    header: tuple[str, ...]
    rows: NDArray[np.float64]

    def column(self, name: str) -> NDArray[np.float64]:
        return self.rows[:, self.header.index(name)]

    def predictor_columns(self) -> list[str]:
        names = [name for name in self.header if name.startswith("x") and name[1:].isdigit()]
        return sorted(names, key=lambda name: int(name[1:]))


@contextmanager
def _open_read(path: str | Path) -> Iterator[TextIO]:
    if str(path) == STDIO:
        yield sys.stdin
        return
    with open(path, encoding="utf-8", newline="") as handle:
        yield handle


@contextmanager
def _open_write(path: str | Path) -> Iterator[TextIO]:
    if str(path) == STDIO:
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def parse_table(handle: TextIO, source: str = "<input>") -> Table:
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError(f"{source} is empty") from None
    header = [name.strip() for name in header]
    if not header or any(not name for name in header):
        raise IngestError(f"{source} has an empty header cell", row=1)
    if len(set(header)) != len(header):
        raise IngestError(f"{source} has duplicate column names", row=1)

    values: list[list[float]] = []
    for line, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) != len(header):
            raise IngestError(
                f"expected {len(header)} cells, found {len(record)}",
                row=line,
                column=header[len(record)] if len(record) < len(header) else str(len(record)),
            )
        parsed: list[float] = []
        for name, cell in zip(header, record, strict=True):
            try:
                value = float(cell)
            except ValueError:
                raise IngestError(f"non-numeric cell {cell!r}", row=line, column=name) from None
            if not math.isfinite(value):
                raise IngestError(f"non-finite cell {cell!r}", row=line, column=name)
            parsed.append(value)
        values.append(parsed)

    rows = np.array(values, dtype=np.float64).reshape(len(values), len(header))
    logger.debug("Read {} rows x {} columns from {}", rows.shape[0], rows.shape[1], source)
    return Table(header=tuple(header), rows=rows)


def read_table(path: str | Path) -> Table:
    with _open_read(path) as handle:
        return parse_table(handle, source=str(path))


def format_value(value: float) -> str:
    return format(float(value), ".17g")


def render_table(header: Sequence[str], rows: ArrayLike) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in np.atleast_2d(np.asarray(rows, dtype=np.float64)):
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def write_table(path: str | Path, header: Sequence[str], rows: ArrayLike) -> None:
    matrix = np.asarray(rows, dtype=np.float64).reshape(-1, len(header))
    with _open_write(path) as handle:
        handle.write(render_table(header, matrix))


def predictor_names(d: int) -> list[str]:
    return [f"x{j}" for j in range(1, d + 1)]


def _predictors(table: Table, source: str) -> NDArray[np.float64]:
    names = table.predictor_columns()
    if not names:
        raise IngestError(f"{source} has no x1..xd columns", row=1)
    expected = predictor_names(len(names))
    if names != expected:
        raise IngestError(f"predictor columns must be {', '.join(expected)}", row=1)
    if table.rows.shape[0] == 0:
        raise IngestError(f"{source} has no data rows")
    return np.column_stack([table.column(name) for name in names])


def load_sample(path: str | Path) -> SampleMatrix:
    table = read_table(path)
    return SampleMatrix(_predictors(table, str(path)))


def load_labeled(path: str | Path) -> LabeledSample:
    table = read_table(path)
    if "y" not in table.header:
        raise IngestError(f"{path} has no y column", row=1)
    return LabeledSample(_predictors(table, str(path)), table.column("y"))


def load_series(path: str | Path) -> MarkovSeries:
    table = read_table(path)
    data = _predictors(table, str(path))
    if data.shape[0] < 2:
        raise IngestError(f"{path} needs at least 2 time points")
    return MarkovSeries(data)


def log_returns(prices: ArrayLike) -> NDArray[np.float64]:
    """z_i = 10 log(p_{i+1} / p_i) along the first axis."""
    values = np.asarray(prices, dtype=np.float64)
    if values.shape[0] < 2:
        raise IngestError("log returns need at least 2 prices")
    if np.any(values <= 0.0):
        row = int(np.flatnonzero(np.any(values.reshape(values.shape[0], -1) <= 0.0, axis=1))[0])
        raise IngestError("prices must be positive", row=row + 2)
    return 10.0 * np.log(values[1:] / values[:-1])


def write_sample(path: str | Path, data: SampleMatrix | LabeledSample | MarkovSeries) -> None:
    if isinstance(data, LabeledSample):
        write_table(path, [*predictor_names(data.d), "y"], np.column_stack([data.x.data, data.y]))
        return
    write_table(path, predictor_names(data.d), data.data)
