from __future__ import annotations

from sincsmooth.ingest.csv_io import (
    Table,
    load_labeled,
    load_sample,
    load_series,
    log_returns,
    read_table,
    write_sample,
    write_table,
)

__all__ = [
    "Table",
    "load_labeled",
    "load_sample",
    "load_series",
    "log_returns",
    "read_table",
    "write_sample",
    "write_table",
]
