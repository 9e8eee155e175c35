from __future__ import annotations

import io
import math
import sys
from pathlib import Path

import numpy as np
import pytest

from sincsmooth.core.types import LabeledSample, MarkovSeries
from sincsmooth.errors import IngestError
from sincsmooth.ingest import (
    load_labeled,
    load_sample,
    load_series,
    log_returns,
    read_table,
    write_sample,
    write_table,
)
from sincsmooth.ingest.csv_io import format_value, parse_table


def _write(tmp_path: Path, text: str, name: str = "data.csv") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_parse_table_skips_blank_lines() -> None:
    table = parse_table(io.StringIO(" x2 ,x1,y\n1,2,3\n\n4,5,6\n"))
    assert table.header == ("x2", "x1", "y")
    assert table.predictor_columns() == ["x1", "x2"]
    np.testing.assert_array_equal(table.column("y"), [3.0, 6.0])


@pytest.mark.parametrize(
    ("text", "fragment"),
    [
        ("", "is empty"),
        ("x1,x1\n1,2\n", "duplicate column names at row 1"),
        ("x1,\n1,2\n", "empty header cell at row 1"),
        ("x1,y\n1,2\n3\n", "at row 3, column y"),
        ("x1,y\n1,abc\n", "non-numeric cell 'abc' at row 2, column y"),
        ("x1\nnan\n", "non-finite cell 'nan' at row 2, column x1"),
        ("x1\n1\ninf\n", "at row 3, column x1"),
    ],
)
def test_parse_errors_name_the_location(text: str, fragment: str) -> None:
    with pytest.raises(IngestError) as excinfo:
        parse_table(io.StringIO(text), source="data.csv")
    assert fragment in str(excinfo.value)


def test_error_location_attributes() -> None:
    with pytest.raises(IngestError) as excinfo:
        parse_table(io.StringIO("x1,y\n1,2\n3,oops\n"))
    assert excinfo.value.row == 3
    assert excinfo.value.column == "y"


def test_loaders_check_columns(tmp_path: Path) -> None:
    with pytest.raises(IngestError, match="no y column"):
        load_labeled(_write(tmp_path, "x1,x2\n1,2\n"))
    with pytest.raises(IngestError, match="x1, x2"):
        load_sample(_write(tmp_path, "x1,x3\n1,2\n"))
    with pytest.raises(IngestError, match="no x1..xd columns"):
        load_sample(_write(tmp_path, "y\n1\n"))
    with pytest.raises(IngestError, match="no data rows"):
        load_sample(_write(tmp_path, "x1\n"))
    with pytest.raises(IngestError, match="at least 2 time points"):
        load_series(_write(tmp_path, "x1\n1\n"))


def test_missing_file_is_an_os_error(tmp_path: Path) -> None:
    with pytest.raises(OSError):
        read_table(tmp_path / "absent.csv")


def test_labeled_round_trip(tmp_path: Path) -> None:
    data = LabeledSample([[0.1, -2.5], [1e-300, 3.0]], [math.pi, -0.0])
    path = tmp_path / "labeled.csv"
    write_sample(path, data)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "x1,x2,y"
    loaded = load_labeled(path)
    np.testing.assert_array_equal(loaded.x.data, data.x.data)
    np.testing.assert_array_equal(loaded.y, data.y)


def test_series_written_to_stdout(capsys: pytest.CaptureFixture[str]) -> None:
    write_sample("-", MarkovSeries([[1.0], [2.5]]))
    assert capsys.readouterr().out == "x1\n1\n2.5\n"


def test_read_from_stdin(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(sys, "stdin", io.StringIO("x1\n0.5\n1.5\n"))
    series = load_series("-")
    assert series.T == 2


def test_write_table_and_format_value(tmp_path: Path) -> None:
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(2.0) == "2"
    assert format_value(math.nan) == "nan"
    path = tmp_path / "table.csv"
    write_table(path, ["R", "score"], [[1.0, -0.25], [2.0, 0.5]])
    assert path.read_text(encoding="utf-8") == "R,score\n1,-0.25\n2,0.5\n"


def test_log_returns() -> None:
    returns = log_returns([[100.0], [110.0], [99.0]])
    np.testing.assert_allclose(returns[:, 0], [10.0 * math.log(1.1), 10.0 * math.log(0.9)])
    with pytest.raises(IngestError, match="at least 2 prices"):
        log_returns([[100.0]])
    with pytest.raises(IngestError) as excinfo:
        log_returns([[100.0], [0.0], [3.0]])
    assert excinfo.value.row == 3
