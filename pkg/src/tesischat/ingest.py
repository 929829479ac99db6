"""Thesis corpus ingestion: CSV parsing, normalization, SQLite build.

The corpus is a 16-column UTF-8 CSV, one row per thesis. Absent data is a
"-" sentinel in text columns and null in the three integer columns; the
loader keeps that mapping symmetric so a full read-back reproduces the
input records exactly.
"""

from __future__ import annotations

import csv
import io
import sqlite3
import unicodedata
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Mapping, TextIO

CANONICAL_COLUMNS: tuple[str, ...] = (
    "id",
    "titulo",
    "autor",
    "tutor",
    "tematica",
    "graduate_title",
    "thesis_level",
    "carrera",
    "year_approval",
    "month_approval",
    "number_pages",
    "resumen",
    "keywords",
    "citation",
    "location",
    "url",
)

NUMERIC_COLUMNS: tuple[str, ...] = ("year_approval", "month_approval", "number_pages")

TABLE_NAME = "tesis"

# the corpus source renamed this column; both spellings are accepted
_HEADER_ALIASES = {"abstract": "resumen"}

MISSING = "-"


class HeaderMismatch(ValueError):
    """CSV header does not name exactly the canonical 16 columns."""


class MalformedRow(ValueError):
    """A data row cannot be read (quote imbalance, wrong field count)."""


class BadNumeric(ValueError):
    """A numeric column holds something other than an integer or the sentinel."""


class StorageError(OSError):
    """The target database file cannot be created or written."""


@dataclass(frozen=True)
class ThesisRecord:
    id: str
    titulo: str
    autor: str
    tutor: str
    tematica: str
    graduate_title: str
    thesis_level: str
    carrera: str
    year_approval: int | None
    month_approval: int | None
    number_pages: int | None
    resumen: str
    keywords: str
    citation: str
    location: str
    url: str


@dataclass(frozen=True)
class IngestReport:
    records_read: int
    records_loaded: int
    rejected: list[tuple[int, str]]
    table_name: str = TABLE_NAME


def _canon_header(name: str) -> str:
    """Normalize a header cell: trim, lowercase, strip accents, apply aliases."""
    lowered = name.strip().lower()
    decomposed = unicodedata.normalize("NFKD", lowered)
    bare = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return _HEADER_ALIASES.get(bare, bare)


def parse_thesis_csv(source: str | TextIO) -> list[dict[str, str]]:
    """Read the corpus CSV into raw row maps keyed by canonical column name.

    The header row is mandatory and must name the 16 canonical columns in
    any order (accents and the abstract/resumen alias are tolerated).
    Raises HeaderMismatch or MalformedRow; never anything else, whatever
    the input bytes decode to.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise HeaderMismatch("input is empty; a 16-column header row is required") from None
    except csv.Error as exc:
        raise MalformedRow(f"row 1: {exc}") from None

    canon = [_canon_header(cell) for cell in header]
    expected = set(CANONICAL_COLUMNS)
    missing = sorted(expected - set(canon))
    unknown = sorted(set(canon) - expected)
    duplicated = sorted({name for name in canon if canon.count(name) > 1})
    if missing or unknown or duplicated:
        raise HeaderMismatch(
            f"header mismatch: missing={missing} unknown={unknown} duplicated={duplicated}"
        )

    rows: list[dict[str, str]] = []
    row_number = 1  # header row
    while True:
        try:
            raw = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MalformedRow(f"row {row_number + 1}: {exc}") from None
        row_number += 1
        if not raw:
            continue
        if len(raw) != len(CANONICAL_COLUMNS):
            raise MalformedRow(
                f"row {row_number}: expected {len(CANONICAL_COLUMNS)} fields, got {len(raw)}"
            )
        rows.append(dict(zip(canon, raw)))
    return rows


def normalize_record(raw: Mapping[str, str]) -> ThesisRecord:
    """Turn a raw row map into a ThesisRecord.

    Text fields are trimmed and empty ones become the "-" sentinel; numeric
    columns parse to int, with "-" (or empty) becoming null. Out-of-range
    values are rejected along with non-integers.
    """
    missing = [column for column in CANONICAL_COLUMNS if column not in raw]
    if missing:
        raise ValueError(f"row map missing columns: {missing}")

    values: dict[str, object] = {}
    for column in CANONICAL_COLUMNS:
        cell = raw[column].strip()
        if column in NUMERIC_COLUMNS:
            values[column] = _parse_numeric(column, cell)
        else:
            values[column] = cell if cell else MISSING
    return ThesisRecord(**values)  # type: ignore[arg-type]


_NUMERIC_BOUNDS = {
    "year_approval": (1900, 2100),
    "month_approval": (1, 12),
    "number_pages": (1, None),
}


def _parse_numeric(column: str, cell: str) -> int | None:
    if cell in ("", MISSING):
        return None
    try:
        value = int(cell)
    except ValueError:
        raise BadNumeric(f"{column}: {cell!r} is not an integer or '-'") from None
    low, high = _NUMERIC_BOUNDS[column]
    if value < low or (high is not None and value > high):
        raise BadNumeric(f"{column}: {value} outside allowed range")
    return value


_CREATE_TABLE = f"""CREATE TABLE {TABLE_NAME} (
    id TEXT PRIMARY KEY,
    titulo TEXT NOT NULL,
    autor TEXT NOT NULL,
    tutor TEXT NOT NULL,
    tematica TEXT NOT NULL,
    graduate_title TEXT NOT NULL,
    thesis_level TEXT NOT NULL,
    carrera TEXT NOT NULL,
    year_approval INTEGER,
    month_approval INTEGER,
    number_pages INTEGER,
    resumen TEXT NOT NULL,
    keywords TEXT NOT NULL,
    citation TEXT NOT NULL,
    location TEXT NOT NULL,
    url TEXT NOT NULL
)"""


def build_database(records: Iterable[ThesisRecord], target: str | Path) -> IngestReport:
    """Create (or replace) the single-table SQLite corpus at `target`.

    Duplicate-id rows are rejected with a per-row diagnostic and loading
    continues; row numbers in the report are 1-based list positions.
    """
    target = Path(target)
    record_list = list(records)
    try:
        if target.exists():
            target.unlink()
        conn = sqlite3.connect(target)
    except (OSError, sqlite3.Error) as exc:
        raise StorageError(f"cannot create database at {target}: {exc}") from None

    rejected: list[tuple[int, str]] = []
    loaded = 0
    placeholders = ", ".join("?" for _ in CANONICAL_COLUMNS)
    insert = f"INSERT INTO {TABLE_NAME} ({', '.join(CANONICAL_COLUMNS)}) VALUES ({placeholders})"
    try:
        with conn:
            conn.execute(_CREATE_TABLE)
            for position, record in enumerate(record_list, start=1):
                row = tuple(getattr(record, column) for column in CANONICAL_COLUMNS)
                try:
                    conn.execute(insert, row)
                    loaded += 1
                except sqlite3.IntegrityError:
                    rejected.append((position, f"DuplicateId: id {record.id!r} already loaded"))
    except sqlite3.Error as exc:
        raise StorageError(f"cannot write database at {target}: {exc}") from None
    finally:
        conn.close()

    return IngestReport(records_read=len(record_list), records_loaded=loaded, rejected=rejected)


def read_records(db_path: str | Path) -> list[ThesisRecord]:
    """Full-table read-back in insertion order, inverse of build_database."""
    conn = sqlite3.connect(f"file:{Path(db_path)}?mode=ro", uri=True)
    try:
        cursor = conn.execute(
            f"SELECT {', '.join(CANONICAL_COLUMNS)} FROM {TABLE_NAME} ORDER BY rowid"
        )
        return [ThesisRecord(**dict(zip(CANONICAL_COLUMNS, row))) for row in cursor.fetchall()]
    finally:
        conn.close()


def ingest_csv(csv_path: str | Path, db_path: str | Path) -> IngestReport:
    """End-to-end ingest: parse, normalize, and load one CSV file.

    Row numbers in the report refer to the CSV (header is row 1). Bad rows
    are reported and skipped; the ingest itself keeps going.
    """
    with open(csv_path, encoding="utf-8", newline="") as stream:
        raw_rows = parse_thesis_csv(stream)

    rejected: list[tuple[int, str]] = []
    accepted: list[ThesisRecord] = []
    seen_ids: set[str] = set()
    for offset, raw in enumerate(raw_rows, start=2):
        try:
            record = normalize_record(raw)
        except BadNumeric as exc:
            rejected.append((offset, str(exc)))
            continue
        if record.id in seen_ids:
            rejected.append((offset, f"DuplicateId: id {record.id!r} already loaded"))
            continue
        seen_ids.add(record.id)
        accepted.append(record)

    build_report = build_database(accepted, db_path)
    return IngestReport(
        records_read=len(raw_rows),
        records_loaded=build_report.records_loaded,
        rejected=rejected + build_report.rejected,
    )


def write_corpus_csv(records: Iterable[ThesisRecord], path: str | Path) -> None:
    """Write records back to the canonical CSV layout (null months become "-")."""
    with open(path, "w", encoding="utf-8", newline="") as stream:
        writer = csv.writer(stream)
        writer.writerow(CANONICAL_COLUMNS)
        for record in records:
            writer.writerow(
                [
                    MISSING if getattr(record, f.name) is None else getattr(record, f.name)
                    for f in fields(record)
                ]
            )
