"""CSV ingestion, column schemas and columnar snapshots."""

from boat.ingest.money import format_money, parse_money
from boat.ingest.parser import ParseReport, parse_file, parse_stream
from boat.ingest.schema import (
    ROLES,
    ColumnSchema,
    FieldSpec,
    default_schema,
    default_schema_text,
    load_schema,
    load_schema_file,
)
from boat.ingest.snapshot import is_snapshot, read_snapshot, write_snapshot

__all__ = [
    "ROLES", "ColumnSchema", "FieldSpec", "ParseReport", "default_schema", "default_schema_text",
    "format_money", "is_snapshot", "load_schema", "load_schema_file", "parse_file", "parse_money",
    "parse_stream", "read_snapshot", "write_snapshot",
]
