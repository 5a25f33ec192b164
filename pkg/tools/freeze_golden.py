"""Freeze golden documents for the bundled synthetic profile.

Every number comes from the nested-loop oracle over the generated CSV, never
from the engine. The report emitters are used only to lay the numbers out in
the document format. Run from the repository root:

    python tools/freeze_golden.py
"""

from __future__ import annotations

from pathlib import Path

from boat import report
from boat.analytics import CapReport, ComparisonRow, ComparisonTable, TrendSeries
from boat.engine import Histogram
from boat.synth import generate, reference_profile
from boat.synth.oracle import naive_cap, naive_cost_comparison, naive_trend, read_records

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# CLI invocations the golden files correspond to (after --input/--out).
COMMANDS = {
    "top_costs.json": ["top-costs", "--group", "diagnosis", "--filter", "age_group=0 to 17",
                       "--years", "2009,2014", "--top", "11"],
    "trend.json": ["trend", "--group", "county", "--filter", "diagnosis=MOOD DISORDERS",
                   "--metric", "count", "--years", "2009:2014", "--top", "5"],
    "cap.json": ["cap", "--filter", "procedure=HIP REPLACEMENT, TOTAL AND PARTIAL",
                 "--filter", "year=2014", "--threshold", "30000"],
}

HIP = "HIP REPLACEMENT, TOTAL AND PARTIAL"


def build() -> dict[str, str]:
    data, _ = generate(reference_profile())
    records, _ = read_records(data)
    n_rows = len(records)
    docs = {}

    rows = naive_cost_comparison(records, [("age_group", "equals", "0 to 17")], "diagnosis", 2009, 2014, 11, 0)
    table = ComparisonTable("diagnosis", (2009, 2014), 2014,
                            tuple(ComparisonRow(label, (t0, t1)) for label, t0, t1 in rows),
                            ("age_group=0 to 17",), n_rows)
    docs["top_costs.json"] = report.dumps(report.emit_bar(table))

    years = tuple(range(2009, 2015))
    trend = naive_trend(records, [("diagnosis", "equals", "MOOD DISORDERS")], "county", "count", list(years), 5)
    series = [TrendSeries(label, years, tuple(values), pct, "count") for label, values, pct in trend]
    docs["trend.json"] = report.dumps(report.emit_lines(series, group_field="county",
                                                        filters=["diagnosis=MOOD DISORDERS"],
                                                        source_rows=n_rows))

    lo, width, k, threshold = 0, 250_000, 60, 3_000_000
    cap = naive_cap(records, [("procedure", "equals", HIP), ("year", "equals", 2014)], threshold, lo, width, k)
    hist = Histogram(lo, width, tuple(cap["counts"]), cap["underflow"], cap["overflow"])
    rep = CapReport(cap["n"], cap["mean"], cap["std_sample"], threshold, cap["fraction_below"], hist, None,
                    (f"procedure={HIP}", "year=2014"), n_rows)
    docs["cap.json"] = report.dumps(report.emit_histogram(rep))
    return docs


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, text in build().items():
        (GOLDEN / name).write_text(text, encoding="utf-8")
        print(f"wrote {GOLDEN / name}")


if __name__ == "__main__":
    main()
