"""The three studies, composed from engine primitives.

* :func:`cost_comparison` - total cost per label for two years, ranked.
* :func:`trend_by_group` - per-group yearly counts / cost totals / mean cost,
  top groups by the final year, with endpoint percent change.
* :func:`cap_analysis` - cost distribution of a cohort against a cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from boat.engine import (
    MONEY,
    ONE_OF,
    TEXT,
    Clause,
    Column,
    Frame,
    Histogram,
    Stats,
    agg,
    describe,
    describe_predicate,
    filter,
    fraction_below,
    group_aggregate,
    histogram,
    top_n,
)
from boat.errors import EmptyCohortError, UndefinedBaselineError, ValidationError

METRICS = ("count", "sum", "mean")


def percent_change(base, new) -> float:
    """``100 * (new - base) / base``, computed exactly then rounded once."""
    b, n = Fraction(base), Fraction(new)
    if b <= 0:
        raise UndefinedBaselineError(f"percent change needs a positive baseline, got {base!r}")
    return float(100 * (n - b) / b)


@dataclass(frozen=True)
class ComparisonRow:
    label: str | None
    totals: tuple[int, int]  # cents, for years[0] and years[1]


@dataclass(frozen=True)
class ComparisonTable:
    group_field: str
    years: tuple[int, int]
    ranking_year: int
    rows: tuple[ComparisonRow, ...]
    filters: tuple[str, ...] = ()
    source_rows: int = 0

    @property
    def labels(self) -> list:
        return [r.label for r in self.rows]


@dataclass(frozen=True)
class TrendSeries:
    group_label: str | None
    years: tuple[int, ...]
    values: tuple
    pct_change_endpoints: float | None
    metric: str = "count"


@dataclass(frozen=True)
class CapReport:
    n: int
    mean: int  # cents
    std_sample: int | None  # cents
    threshold: int  # cents
    fraction_below: float
    histogram: Histogram
    stats: Stats
    filters: tuple[str, ...] = ()
    source_rows: int = 0


def _slice_strings(predicate: Sequence[Clause]) -> tuple[str, ...]:
    return tuple(str(c) for c in predicate)


def cost_comparison(frame: Frame, predicate: Sequence[Clause], group_field: str,
                    years: tuple[int, int], top: int | None = 10, skip_top: int = 0) -> ComparisonTable:
    """Total cost per label in two years, ranked by the later year.

    Ranking is descending by the later year's total with ties broken by
    ascending label; ``skip_top`` leading labels are dropped before ``top``
    are kept (``top=None`` keeps everything).
    """
    y0, y1 = years
    if not y0 < y1:
        raise ValidationError(f"years must be ascending, got {years}")
    if skip_top < 0 or (top is not None and top < 0):
        raise ValidationError("top and skip_top must be non-negative")
    year_col, cost_col = frame.resolve("year"), frame.resolve("cost")
    group_col = frame.resolve(group_field)
    sliced = filter(frame, [*predicate, Clause(year_col, ONE_OF, (y0, y1))])
    grouped = group_aggregate(sliced, [group_col, year_col], [agg("sum", cost_col, "total")])

    totals: dict = {}
    for label, year, total in grouped.to_rows():
        totals.setdefault(label, [0, 0])[0 if year == y0 else 1] = total
    labels = list(totals)
    pivot = Frame([
        ("label", Column.from_values(TEXT, labels)),
        ("total_y0", Column.from_values(MONEY, [totals[lab][0] for lab in labels])),
        ("total_y1", Column.from_values(MONEY, [totals[lab][1] for lab in labels])),
    ])
    limit = len(labels) if top is None else min(len(labels), skip_top + top)
    ranked = top_n(pivot, "total_y1", limit).to_rows()[skip_top:]
    return ComparisonTable(
        group_field=group_field,
        years=(y0, y1),
        ranking_year=y1,
        rows=tuple(ComparisonRow(lab, (t0, t1)) for lab, t0, t1 in ranked),
        filters=_slice_strings(predicate),
        source_rows=frame.row_count,
    )


def trend_by_group(frame: Frame, predicate: Sequence[Clause], group_field: str, metric: str,
                   years: Sequence[int], top_k: int) -> list[TrendSeries]:
    """Yearly metric per group for the ``top_k`` groups of the final year.

    ``metric`` is ``count`` (discharge records), ``sum`` (total cost, cents)
    or ``mean`` (cost per case at cent precision). Group-years without rows
    are 0 for count/sum and ``None`` for mean.
    """
    years = tuple(years)
    if len(years) < 2:
        raise ValidationError("a trend needs at least two years")
    if list(years) != sorted(set(years)):
        raise ValidationError(f"years must be strictly ascending, got {years}")
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
    if top_k < 0:
        raise ValidationError("top_k must be non-negative")
    year_col, cost_col = frame.resolve("year"), frame.resolve("cost")
    group_col = frame.resolve(group_field)
    sliced = filter(frame, [*predicate, Clause(year_col, ONE_OF, years)])
    spec = agg("count", None, "value") if metric == "count" else agg(metric, cost_col, "value")
    grouped = group_aggregate(sliced, [group_col, year_col], [spec])

    empty = None if metric == "mean" else 0
    table: dict = {}
    position = {y: i for i, y in enumerate(years)}
    for label, year, value in grouped.to_rows():
        table.setdefault(label, [empty] * len(years))[position[year]] = value
    labels = list(table)
    final_type = "integer" if metric == "count" else MONEY
    finals = Frame([
        ("label", Column.from_values(TEXT, labels)),
        ("final", Column.from_values(final_type, [table[lab][-1] for lab in labels])),
    ])
    out = []
    for label, _ in top_n(finals, "final", top_k).to_rows():
        values = table[label]
        first, last = values[0], values[-1]
        pct = percent_change(first, last) if first is not None and last is not None and first > 0 else None
        out.append(TrendSeries(label, years, tuple(values), pct, metric))
    return out


def cap_analysis(frame: Frame, predicate: Sequence[Clause], threshold: int, hist_lo: int = 0,
                 hist_width: int = 250_000, hist_k: int = 60) -> CapReport:
    """Distribution of cohort costs (cents) against a cap ``threshold``."""
    cohort = filter(frame, predicate)
    costs = cohort.column("cost")
    stats = describe(costs)
    if stats.n == 0:
        raise EmptyCohortError(describe_predicate(predicate))
    return CapReport(
        n=stats.n,
        mean=stats.mean_rounded,
        std_sample=stats.std_rounded,
        threshold=threshold,
        fraction_below=fraction_below(costs, threshold),
        histogram=histogram(costs, hist_lo, hist_width, hist_k),
        stats=stats,
        filters=_slice_strings(predicate),
        source_rows=frame.row_count,
    )
