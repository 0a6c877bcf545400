"""CSV ingestion of claim records and emission of samples and tables."""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .distributions import CensoredSample

SCHEMA_VERSION = "1"


class IngestError(ValueError):
    """Malformed input file; carries the offending row and column when known."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class ClaimRecord:
    z: float
    delta: int
    year: int | None = None


def _parse_float(text, row, column):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise IngestError(f"cannot parse {text!r} as a number", row, column) from None
    if not math.isfinite(value) or value <= 0:
        raise IngestError(f"observation must be positive and finite, got {text!r}", row, column)
    return value


def _parse_delta(text, row, column):
    s = str(text).strip().lower()
    if s in ("1", "1.0", "true", "t"):
        return 1
    if s in ("0", "0.0", "false", "f"):
        return 0
    raise IngestError(f"censoring indicator must be 0 or 1, got {text!r}", row, column)


def _parse_year(text, row, column):
    try:
        return int(str(text).strip())
    except ValueError:
        raise IngestError(f"cannot parse {text!r} as a year", row, column) from None


def ingest_csv(path, z_col="z", delta_col="delta", year_col=None):
    """Read claim records from a CSV file with a header row.

    Row numbers in error messages count the header as row 1.
    """
    try:
        with open(path, newline="") as fh:
            return _ingest(fh, z_col, delta_col, year_col)
    except FileNotFoundError:
        raise
    except UnicodeDecodeError as exc:
        raise IngestError(f"file is not valid text: {exc}") from None


def ingest_text(text, z_col="z", delta_col="delta", year_col=None):
    return _ingest(io.StringIO(text), z_col, delta_col, year_col)


def _ingest(fh, z_col, delta_col, year_col):
    reader = csv.DictReader(fh)
    if reader.fieldnames is None:
        raise IngestError("missing header row")
    header = [h.strip() for h in reader.fieldnames]
    reader.fieldnames = header
    for col in (z_col, delta_col) + ((year_col,) if year_col else ()):
        if col not in header:
            raise IngestError(f"column not found; available: {header}", column=col)
    records = []
    for row_no, row in enumerate(reader, start=2):
        if None in row or any(row.get(c) is None for c in (z_col, delta_col)):
            raise IngestError("wrong number of fields", row_no)
        z = _parse_float(row[z_col].strip(), row_no, z_col)
        delta = _parse_delta(row[delta_col], row_no, delta_col)
        year = _parse_year(row[year_col], row_no, year_col) if year_col else None
        records.append(ClaimRecord(z, delta, year))
    if not records:
        raise IngestError("no data rows")
    return records


def records_to_sample(records):
    z = np.fromiter((r.z for r in records), dtype=np.float64, count=len(records))
    delta = np.fromiter((r.delta for r in records), dtype=bool, count=len(records))
    return CensoredSample(z, delta)


def write_sample_csv(fh, sample, years=None, z_col="z", delta_col="delta", year_col="year"):
    """Write ``(z, delta[, year])`` rows; values use the shortest exact repr so
    re-ingestion reproduces the sample bit for bit."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([z_col, delta_col] + ([year_col] if years is not None else []))
    for i, (z, d) in enumerate(zip(sample.z, sample.delta)):
        row = [repr(float(z)), int(d)]
        if years is not None:
            row.append(int(years[i]))
        writer.writerow(row)


def fmt(x):
    """Locale-independent decimal with 10 significant digits; blank for missing."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.10g}"


def write_rows_csv(fh, rows, columns):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return float(f"{x:.10g}")
    return x


def dump_json(fh, payload):
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(_jsonable(payload))
    json.dump(doc, fh, indent=2)
    fh.write("\n")
