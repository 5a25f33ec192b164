from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boat import report
from boat.analytics import CapReport, ComparisonRow, ComparisonTable, TrendSeries
from boat.engine import describe, histogram
from boat.errors import EmptyResultError, InconsistentSeriesError


def _table(n_labels):
    rows = tuple(ComparisonRow(f"DX {i}", (110_000_000_000 - i * 7, 145_000_000_001 - i)) for i in range(n_labels))
    return ComparisonTable("diagnosis", (2009, 2014), 2014, rows, ("age_group=0 to 17",), 1234)


def _cap(values, lo=0, width=5, k=2, threshold=30):
    return CapReport(len(values), 0, None, threshold, 0.5, histogram(values, lo, width, k), describe(values))


def test_bar_shape():
    doc = report.emit_bar(_table(2))
    assert doc.kind == "grouped_bar" and len(doc.series) == 2
    assert all(len(s.x) == 2 for s in doc.series)
    assert doc.series[1].y[0] == Decimal("1450000000.01")
    assert [len(s.x) for s in report.emit_bar(_table(1)).series] == [1, 1]
    with pytest.raises(EmptyResultError):
        report.emit_bar(_table(0))


def test_bar_round_trips_through_file(tmp_path):
    doc = report.emit_bar(_table(11))
    path = report.write_document(doc, tmp_path / "bar.json", csv_copy=True)
    back = report.read_document(path)
    assert back == doc and back.generated_at == doc.generated_at
    assert (tmp_path / "bar.csv").read_text().splitlines()[1] == "2009,DX 0,1100000000.00"


def test_lines():
    years = tuple(range(2009, 2015))
    series = [TrendSeries(f"C{i}", years, tuple(range(i, i + 6)), 40.0) for i in range(5)]
    doc = report.emit_lines(series, group_field="county")
    assert doc.kind == "multi_line" and len(doc.series) == 5 and all(len(s.x) == 6 for s in doc.series)
    assert len(report.emit_lines(series[:1]).series) == 1
    bad = series + [TrendSeries("X", (2009, 2014), (1, 2), None)]
    with pytest.raises(InconsistentSeriesError):
        report.emit_lines(bad)


def test_lines_money_metric_round_trip():
    s = [TrendSeries("A", (2009, 2014), (123456, None), None, "mean")]
    doc = report.emit_lines(s)
    assert doc.series[0].y == (Decimal("1234.56"), None)
    assert report.loads(report.dumps(doc)) == doc


def test_histogram_doc():
    doc = report.emit_histogram(_cap(list(range(10))))
    assert doc.series[0].y == (5, 5) and len(doc.series[0].x) == 2
    over = report.emit_histogram(_cap([100, 200, 300]))
    assert over.series[0].y == (0, 0) and over.metadata["overflow"] == 3
    assert report.loads(report.dumps(over)) == over


@given(st.lists(st.integers(0, 10**14), min_size=1, max_size=20), st.floats(0, 1), st.integers(1, 10**9))
def test_cent_exact_and_lossless(cents, frac, threshold):
    rows = tuple(ComparisonRow(f"L{i}", (c, c // 3)) for i, c in enumerate(cents))
    doc = report.emit_bar(ComparisonTable("g", (2009, 2014), 2014, rows))
    text = report.dumps(doc)
    assert report.loads(text) == doc
    for s, idx in zip(doc.series, (0, 1)):
        assert [int(Decimal(str(y)) * 100) for y in s.y] == [r.totals[idx] for r in rows]
    cap = CapReport(1, threshold, None, threshold, frac, histogram([1], 0, 1, 1), describe([1]))
    hdoc = report.emit_histogram(cap)
    back = report.loads(report.dumps(hdoc))
    assert back == hdoc and back.metadata["fraction_below"] == frac


def test_dumps_deterministic_ignores_timestamp():
    a, b = report.emit_bar(_table(3)), report.emit_bar(_table(3))
    object.__setattr__(b, "generated_at", "1999-01-01T00:00:00+00:00")
    assert a == b and report.dumps(a) == report.dumps(b)
    assert "generated_at" not in report.dumps(a)


def test_money_written_as_two_decimal_numbers():
    text = report.dumps(report.emit_bar(_table(1)))
    assert "1100000000.00" in text and '"1100000000.00"' not in text
