"""CSV and JSON emitters with byte-stable output."""
from __future__ import annotations

from pathlib import Path

import polars as pl

from src.jsonio import write_json

FLOAT_FORMAT = "%.17g"


def write_table(rows: list[dict], path: Path, sort_by: list[str], columns: list[str]) -> Path:
    """
    Write rows as CSV sorted on `sort_by`, with a header row and 17
    significant digits.
    """
    if rows:
        df = pl.DataFrame(rows, infer_schema_length=None).select(columns).sort(sort_by)
    else:
        df = pl.DataFrame(schema={c: pl.Utf8 for c in columns})
    table = df.to_arrow().to_pandas()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_document(document, path: Path) -> Path:
    return write_json(document, path)
