"""On-disk columnar snapshots, so a large CSV is parsed once.

Layout of a snapshot directory::

    manifest.json       columns (name, type, encoding, rows, files), roles
    c000.values         int64 / float64, little-endian
    c000.valid          one byte per row, 1 = present
    c001.codes          int32 little-endian dictionary codes, -1 = null
    c001.dict           uint32 count, then uint32-length-prefixed UTF-8 entries
    c002.text           per row: uint32 length + UTF-8 bytes; 0xFFFFFFFF = null

Dictionary encoding is used for text columns with at most half as many
distinct values as rows; other text columns are stored plainly.
"""

from __future__ import annotations

import json
import os
import struct
from pathlib import Path

import numpy as np

from boat.engine.frame import COLUMN_TYPES, REAL, TEXT, Column, Frame
from boat.errors import SnapshotError

FORMAT = "boat-snapshot"
VERSION = 1
MANIFEST = "manifest.json"
_NULL_LEN = 0xFFFFFFFF
_U32 = struct.Struct("<I")


def _write_strings(path: Path, strings, count_prefix: bool = False) -> None:
    strings = list(strings)
    with open(path, "wb") as fh:
        if count_prefix:
            fh.write(_U32.pack(len(strings)))
        for s in strings:
            if s is None:
                fh.write(_U32.pack(_NULL_LEN))
            else:
                b = s.encode("utf-8")
                fh.write(_U32.pack(len(b)))
                fh.write(b)


def _decode_strings(buf: bytes, pos: int, count: int | None, label: str) -> list[str | None]:
    out: list[str | None] = []
    while pos + 4 <= len(buf):
        (length,) = _U32.unpack_from(buf, pos)
        pos += 4
        if length == _NULL_LEN:
            out.append(None)
            continue
        if pos + length > len(buf):
            break
        out.append(buf[pos:pos + length].decode("utf-8"))
        pos += length
    if pos != len(buf) or (count is not None and len(out) != count):
        raise SnapshotError(f"{label}: truncated or inconsistent string file")
    return out


def write_snapshot(frame: Frame, directory: str | os.PathLike) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (name, col) in enumerate(frame.items()):
        stem = f"c{i:03d}"
        entry = {"name": name, "type": col.type, "rows": len(col)}
        if col.type == TEXT:
            used = np.unique(col.data[col.valid])
            if len(used) * 2 <= len(col):
                remap = np.full(len(col.categories) + 1, -1, dtype=np.int32)
                remap[used] = np.arange(len(used), dtype=np.int32)
                codes = remap[col.data]  # code -1 hits the trailing -1 slot
                _write_strings(out / f"{stem}.dict", [col.categories[c] for c in used.tolist()],
                               count_prefix=True)
                codes.astype("<i4").tofile(out / f"{stem}.codes")
                entry.update(encoding="dictionary", files=[f"{stem}.codes", f"{stem}.dict"])
            else:
                _write_strings(out / f"{stem}.text", col.to_list())
                entry.update(encoding="plain", files=[f"{stem}.text"])
        else:
            dtype = "<f8" if col.type == REAL else "<i8"
            col.data.astype(dtype).tofile(out / f"{stem}.values")
            col.valid.astype(np.uint8).tofile(out / f"{stem}.valid")
            entry.update(encoding="fixed", files=[f"{stem}.values", f"{stem}.valid"])
        entries.append(entry)
    manifest = {"format": FORMAT, "version": VERSION, "row_count": frame.row_count,
                "roles": frame.roles, "columns": entries}
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return out


def is_snapshot(path: str | os.PathLike) -> bool:
    return (Path(path) / MANIFEST).is_file()


def _fixed(path: Path, dtype: str, rows: int) -> np.ndarray:
    arr = np.fromfile(path, dtype=dtype)
    if len(arr) != rows:
        raise SnapshotError(f"{path.name}: expected {rows} values, found {len(arr)}")
    return arr


def read_snapshot(directory: str | os.PathLike) -> Frame:
    root = Path(directory)
    try:
        manifest = json.loads((root / MANIFEST).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise SnapshotError(f"cannot read snapshot manifest in {root}: {exc}") from exc
    if manifest.get("format") != FORMAT or manifest.get("version") != VERSION:
        raise SnapshotError(f"{root}: not a {FORMAT} v{VERSION} snapshot")
    rows = manifest["row_count"]
    columns = []
    for entry in manifest["columns"]:
        ctype, files = entry["type"], [root / f for f in entry["files"]]
        if ctype not in COLUMN_TYPES or entry["rows"] != rows:
            raise SnapshotError(f"{root}: bad manifest entry for {entry['name']!r}")
        if entry["encoding"] == "dictionary":
            codes = _fixed(files[0], "<i4", rows).astype(np.int32)
            raw = files[1].read_bytes()
            if len(raw) < 4:
                raise SnapshotError(f"{files[1].name}: missing entry count")
            (count,) = _U32.unpack_from(raw, 0)
            cats = _decode_strings(raw, 4, count, files[1].name)
            if len(codes) and (codes.max() >= count or codes.min() < -1):
                raise SnapshotError(f"{files[0].name}: code out of dictionary range")
            col = Column(TEXT, codes, categories=cats)
        elif entry["encoding"] == "plain":
            col = Column.from_values(TEXT, _decode_strings(files[0].read_bytes(), 0, rows, files[0].name))
        else:
            dtype = "<f8" if ctype == REAL else "<i8"
            values = _fixed(files[0], dtype, rows)
            valid = _fixed(files[1], "u1", rows).astype(bool)
            col = Column(ctype, values, valid)
        columns.append((entry["name"], col))
    return Frame(columns, manifest.get("roles", {}), row_count=rows)
