"""Columnar frame and the core operations over it."""

from boat.engine.aggregate import (
    AggregateSpec,
    agg,
    finalize,
    group_aggregate,
    merge_partials,
    parallel_group_aggregate,
    partial_aggregate,
)
from boat.engine.frame import COLUMN_TYPES, INTEGER, MONEY, REAL, TEXT, YEAR, Column, Frame
from boat.engine.ops import BETWEEN, EQUALS, ONE_OF, Clause, describe_predicate, filter, sort_by, top_n
from boat.engine.stats import Histogram, Stats, describe, fraction_below, histogram, percentile

__all__ = [
    "AggregateSpec", "BETWEEN", "COLUMN_TYPES", "Clause", "Column", "EQUALS", "Frame", "Histogram",
    "INTEGER", "MONEY", "ONE_OF", "REAL", "Stats", "TEXT", "YEAR", "agg", "describe",
    "describe_predicate", "filter", "finalize", "fraction_below", "group_aggregate", "histogram",
    "merge_partials", "parallel_group_aggregate", "partial_aggregate", "percentile", "sort_by", "top_n",
]
