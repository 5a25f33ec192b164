"""Plot-ready data documents for the three figures.

A document is one JSON object with ``kind``, ``title``, ``axes``, ``series``
and ``metadata``. Money is written as JSON numbers with exactly two
decimals, converted exactly from cents, and read back as ``Decimal``. The
generation timestamp is not part of the document body; ``write_document``
puts it in a one-line ``<file>.meta`` sidecar so identical inputs give
byte-identical documents.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal
from pathlib import Path
from typing import Any, Sequence

from boat.analytics import CapReport, ComparisonTable, TrendSeries
from boat.errors import EmptyResultError, InconsistentSeriesError, ValidationError

GROUPED_BAR = "grouped_bar"
MULTI_LINE = "multi_line"
HISTOGRAM = "histogram"
KINDS = (GROUPED_BAR, MULTI_LINE, HISTOGRAM)

_REAL_KEYS = frozenset({"fraction_below", "pct_change"})
_RAW = "\x00num:"
_RAW_TOKEN = re.compile(r'"\\u0000num:(-?\d+\.\d+)"')
_CENT = Decimal("0.01")


def dollars(cents: int | None) -> Decimal | None:
    """Exact cents -> dollars with two decimal places."""
    if cents is None:
        return None
    return Decimal(int(cents)).scaleb(-2).quantize(_CENT)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class Series:
    name: Any
    x: tuple
    y: tuple
    pct_change: float | None = None


@dataclass(frozen=True)
class PlotDocument:
    kind: str
    title: str
    axes: dict
    series: tuple[Series, ...]
    metadata: dict
    generated_at: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown document kind {self.kind!r}")
        if self.kind == MULTI_LINE and len({len(s.x) for s in self.series}) > 1:
            raise InconsistentSeriesError("multi_line series must share one x vector length")

    def to_dict(self) -> dict:
        series = []
        for s in self.series:
            entry = {"name": s.name, "x": list(s.x), "y": list(s.y)}
            if self.kind == MULTI_LINE:
                entry["pct_change"] = s.pct_change
            series.append(entry)
        return {"kind": self.kind, "title": self.title, "axes": self.axes, "series": series,
                "metadata": self.metadata}

    @classmethod
    def from_dict(cls, d: dict, generated_at: str | None = None) -> PlotDocument:
        d = _reals(d)
        series = tuple(Series(s["name"], tuple(s["x"]), tuple(s["y"]), s.get("pct_change"))
                       for s in d["series"])
        return cls(d["kind"], d["title"], d["axes"], series, d["metadata"], generated_at)


def _reals(obj):
    """Undo ``parse_float=Decimal`` for keys that hold plain reals."""
    if isinstance(obj, dict):
        return {k: (float(v) if k in _REAL_KEYS and isinstance(v, Decimal) else _reals(v))
                for k, v in obj.items()}
    if isinstance(obj, list):
        return [_reals(v) for v in obj]
    return obj


def _mark(obj):
    if isinstance(obj, Decimal):
        return f"{_RAW}{obj:f}"
    if isinstance(obj, dict):
        return {k: _mark(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark(v) for v in obj]
    return obj


def dumps_json(obj) -> str:
    """JSON text with ``Decimal`` values written as plain numbers."""
    text = json.dumps(_mark(obj), indent=2, ensure_ascii=False, allow_nan=False)
    return _RAW_TOKEN.sub(r"\1", text) + "\n"


def dumps(doc: PlotDocument) -> str:
    return dumps_json(doc.to_dict())


def loads(text: str, generated_at: str | None = None) -> PlotDocument:
    return PlotDocument.from_dict(json.loads(text, parse_float=Decimal), generated_at)


def to_csv(doc: PlotDocument) -> str:
    """Flat ``series,x,y`` rows, one per point."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "x", "y"])
    for s in doc.series:
        for x, y in zip(s.x, s.y):
            writer.writerow(["" if s.name is None else s.name, "" if x is None else x,
                             "" if y is None else y])
    return buf.getvalue()


def write_document(doc: PlotDocument, path: str | os.PathLike, csv_copy: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc), encoding="utf-8")
    if csv_copy:
        path.with_suffix(".csv").write_text(to_csv(doc), encoding="utf-8")
    sidecar = path.with_name(path.name + ".meta")
    sidecar.write_text(json.dumps({"generated_at": doc.generated_at or _now()}) + "\n", encoding="utf-8")
    return path


def read_document(path: str | os.PathLike) -> PlotDocument:
    path = Path(path)
    sidecar = path.with_name(path.name + ".meta")
    stamp = json.loads(sidecar.read_text(encoding="utf-8"))["generated_at"] if sidecar.exists() else None
    return loads(path.read_text(encoding="utf-8"), stamp)


def _axes(x_label, x_unit, y_label, y_unit) -> dict:
    return {"x": {"label": x_label, "unit": x_unit}, "y": {"label": y_label, "unit": y_unit}}


def emit_bar(table: ComparisonTable, title: str | None = None) -> PlotDocument:
    if not table.rows:
        raise EmptyResultError("cost comparison table is empty")
    labels = tuple(r.label for r in table.rows)
    series = tuple(
        Series(str(year), labels, tuple(dollars(r.totals[i]) for r in table.rows))
        for i, year in enumerate(table.years)
    )
    return PlotDocument(
        kind=GROUPED_BAR,
        title=title or f"Total costs by {table.group_field}, {table.years[0]} vs {table.years[1]}",
        axes=_axes(table.group_field, None, "total cost", "USD"),
        series=series,
        metadata={
            "source_rows": table.source_rows,
            "filters": list(table.filters),
            "group_field": table.group_field,
            "years": list(table.years),
            "ranking_year": table.ranking_year,
        },
        generated_at=_now(),
    )


def emit_lines(series: Sequence[TrendSeries], title: str | None = None, *, group_field: str | None = None,
               filters: Sequence[str] = (), source_rows: int | None = None) -> PlotDocument:
    if not series:
        raise EmptyResultError("no trend series to emit")
    years = series[0].years
    if any(s.years != years for s in series):
        raise InconsistentSeriesError("trend series do not share the same year vector")
    metric = series[0].metric
    money = metric in ("sum", "mean")
    lines = tuple(
        Series(s.group_label, tuple(years), tuple(dollars(v) if money else v for v in s.values),
               s.pct_change_endpoints)
        for s in series
    )
    y_label = {"count": "cases", "sum": "total cost", "mean": "mean cost per case"}[metric]
    return PlotDocument(
        kind=MULTI_LINE,
        title=title or f"{y_label.capitalize()} by {group_field or 'group'}, {years[0]}-{years[-1]}",
        axes=_axes("year", None, y_label, "USD" if money else "count"),
        series=lines,
        metadata={
            "source_rows": source_rows,
            "filters": list(filters),
            "group_field": group_field,
            "metric": metric,
            "years": list(years),
        },
        generated_at=_now(),
    )


def emit_histogram(report: CapReport, title: str | None = None) -> PlotDocument:
    h = report.histogram
    edges = tuple(dollars(e) for e in h.left_edges())
    return PlotDocument(
        kind=HISTOGRAM,
        title=title or "Cost distribution",
        axes=_axes("cost (bin left edge)", "USD", "patients", "count"),
        series=(Series("count", edges, tuple(h.counts)),),
        metadata={
            "source_rows": report.source_rows,
            "filters": list(report.filters),
            "n": report.n,
            "mean": dollars(report.mean),
            "std_sample": dollars(report.std_sample),
            "threshold": dollars(report.threshold),
            "fraction_below": report.fraction_below,
            "bin_width": dollars(h.bin_width),
            "underflow": h.underflow,
            "overflow": h.overflow,
        },
        generated_at=_now(),
    )
