"""Streaming CSV -> Frame with per-row quarantine.

Accepted values go straight into compact typed buffers (``array.array``),
so memory grows with the column storage of accepted rows, not with the raw
text. Rows with any bad field are quarantined whole and tallied in a
:class:`ParseReport`.
"""

from __future__ import annotations

import csv
import io
import logging
import os
from array import array
from dataclasses import dataclass, field
from typing import BinaryIO

import numpy as np

from boat.engine.frame import TEXT, Column, Frame
from boat.errors import DataError, MoneyParseError
from boat.ingest.money import parse_money
from boat.ingest.schema import ColumnSchema

logger = logging.getLogger(__name__)

YEAR_MIN, YEAR_MAX = 1990, 2100
MAX_SAMPLES = 20
ROW_SHAPE = "<row>"  # errors_by_field key for records with the wrong field count


@dataclass
class ParseReport:
    rows_read: int = 0
    rows_ok: int = 0
    rows_quarantined: int = 0
    errors_by_field: dict[str, int] = field(default_factory=dict)
    first_errors: list[tuple[int, str, str]] = field(default_factory=list)

    def record(self, line: int, field_name: str, raw: str) -> None:
        self.errors_by_field[field_name] = self.errors_by_field.get(field_name, 0) + 1
        if len(self.first_errors) < MAX_SAMPLES:
            self.first_errors.append((line, field_name, raw))

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_ok": self.rows_ok,
            "rows_quarantined": self.rows_quarantined,
            "errors_by_field": dict(sorted(self.errors_by_field.items())),
            "first_errors": [{"line": ln, "field": f, "raw": r} for ln, f, r in self.first_errors],
        }

    @classmethod
    def from_dict(cls, d: dict) -> ParseReport:
        return cls(d["rows_read"], d["rows_ok"], d["rows_quarantined"], dict(d["errors_by_field"]),
                   [(e["line"], e["field"], e["raw"]) for e in d["first_errors"]])


class _Builder:
    """Append-only typed buffer for one column."""

    def __init__(self, semantic_type: str):
        self.type = semantic_type
        if semantic_type == TEXT:
            self.codes = array("i")
            self.index: dict[str, int] = {}
        else:
            self.values = array("q")
            self.valid = bytearray()

    def append(self, value) -> None:
        if self.type == TEXT:
            self.codes.append(-1 if value is None else self.index.setdefault(value, len(self.index)))
        elif value is None:
            self.values.append(0)
            self.valid.append(0)
        else:
            self.values.append(value)
            self.valid.append(1)

    def finish(self) -> Column:
        if self.type == TEXT:
            codes = np.frombuffer(self.codes, dtype=np.int32) if len(self.codes) else np.empty(0, np.int32)
            return Column(TEXT, codes, categories=list(self.index))
        n = len(self.values)
        values = np.frombuffer(self.values, dtype=np.int64) if n else np.empty(0, np.int64)
        valid = np.frombuffer(self.valid, dtype=bool) if n else np.empty(0, bool)
        return Column(self.type, values, valid)


class _Bad(Exception):
    pass


def _coerce(raw: str, semantic_type: str, nullable: bool):
    if raw == "" or raw.isspace():
        if nullable:
            return None
        raise _Bad
    if semantic_type == TEXT:
        return raw
    if semantic_type == "money":
        try:
            return parse_money(raw)
        except MoneyParseError:
            raise _Bad from None
    try:
        value = int(raw.strip())
    except ValueError:
        raise _Bad from None
    if semantic_type == "year" and not YEAR_MIN <= value <= YEAR_MAX:
        raise _Bad
    return value


def parse_stream(schema: ColumnSchema, stream: BinaryIO) -> tuple[Frame, ParseReport]:
    """Parse a UTF-8 CSV byte stream (header row required)."""
    text = io.TextIOWrapper(stream, encoding="utf-8-sig", newline="")
    report = ParseReport()
    try:
        reader = csv.reader(text)
        header = next(reader, None)
        if header is None:
            builders = [(f.name, _Builder(f.semantic_type)) for f in schema.fields]
            return Frame([(n, b.finish()) for n, b in builders], schema.roles), report

        positions = schema.match_header(header)
        specs = [(f.name, positions[f.name], f.semantic_type, f.nullable) for f in schema.fields]
        used = set(positions.values())
        extras = [(h, i) for i, h in enumerate(header) if i not in used and h not in positions]
        builders = [_Builder(t) for _, _, t, _ in specs] + [_Builder(TEXT) for _ in extras]
        width = len(header)

        for record in reader:
            if not record:
                continue
            report.rows_read += 1
            if len(record) != width:
                report.rows_quarantined += 1
                report.record(reader.line_num, ROW_SHAPE, f"{len(record)} fields, expected {width}")
                continue
            values = []
            bad = False
            for name, idx, stype, nullable in specs:
                raw = record[idx]
                try:
                    values.append(_coerce(raw, stype, nullable))
                except _Bad:
                    report.record(reader.line_num, name, raw)
                    bad = True
            if bad:
                report.rows_quarantined += 1
                continue
            for _, idx in extras:
                values.append(record[idx] or None)
            for b, v in zip(builders, values):
                b.append(v)
            report.rows_ok += 1
    except UnicodeDecodeError as exc:
        raise DataError(f"input is not valid UTF-8: {exc}") from exc
    except csv.Error as exc:
        raise DataError(f"malformed CSV: {exc}") from exc
    finally:
        text.detach()

    names = [n for n, _, _, _ in specs] + [h for h, _ in extras]
    frame = Frame([(n, b.finish()) for n, b in zip(names, builders)], schema.roles)
    if report.rows_quarantined:
        logger.warning("quarantined %d of %d rows", report.rows_quarantined, report.rows_read)
    return frame, report


def parse_file(schema: ColumnSchema, path: str | os.PathLike) -> tuple[Frame, ParseReport]:
    with open(path, "rb") as fh:
        return parse_stream(schema, fh)
