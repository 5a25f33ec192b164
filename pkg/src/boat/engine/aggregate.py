"""Grouping by labels.

Aggregation runs in two phases. ``partial_aggregate`` reduces a frame to
exact per-group states (counts, integer sums, sums of squares, extrema);
``merge_partials`` combines states from any number of partitions; and
``finalize`` turns them into the output frame. Because every state is exact,
any partitioning and any merge order give the same bits as one sequential
pass.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from boat.engine.frame import INT_TYPES, INTEGER, MONEY, REAL, TEXT, Column, Frame
from boat.engine.stats import round_half_up, sample_std
from boat.errors import AggregateOnTextError, ValidationError

FUNCTIONS = ("sum", "count", "mean", "min", "max", "std_sample", "count_null")
_SAFE = 2**62


@dataclass(frozen=True)
class AggregateSpec:
    function: str
    input_field: str | None = None
    output_name: str | None = None

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ValidationError(f"unknown aggregate function {self.function!r}")
        if self.input_field is None and self.function != "count":
            raise ValidationError(f"aggregate {self.function!r} needs an input field")
        if self.output_name is None:
            name = self.function if self.input_field is None else f"{self.function}_{self.input_field}"
            object.__setattr__(self, "output_name", name)


def agg(function: str, input_field: str | None = None, output_name: str | None = None) -> AggregateSpec:
    return AggregateSpec(function, input_field, output_name)


@dataclass
class FieldState:
    n: int = 0
    nulls: int = 0
    sum: int | Fraction = 0
    sumsq: int | Fraction = 0
    min: Any = None
    max: Any = None

    def merge(self, other: FieldState) -> FieldState:
        return FieldState(
            self.n + other.n,
            self.nulls + other.nulls,
            self.sum + other.sum,
            self.sumsq + other.sumsq,
            _pick(min, self.min, other.min),
            _pick(max, self.max, other.max),
        )


def _pick(fn, a, b):
    if a is None:
        return b
    if b is None:
        return a
    return fn(a, b)


@dataclass
class GroupState:
    rows: int = 0
    fields: dict[str, FieldState] = field(default_factory=dict)

    def merge(self, other: GroupState) -> GroupState:
        names = list(self.fields) + [n for n in other.fields if n not in self.fields]
        merged = {n: self.fields.get(n, FieldState()).merge(other.fields.get(n, FieldState())) for n in names}
        return GroupState(self.rows + other.rows, merged)


@dataclass
class PartialAggregate:
    keys: tuple[str, ...]
    key_types: tuple[str, ...]
    specs: tuple[AggregateSpec, ...]
    input_types: dict[str, str]
    groups: dict[tuple, GroupState]


def _factorize(col: Column) -> tuple[np.ndarray, int]:
    """Dense ids per row with 0 reserved for null, plus the id count."""
    if col.type == TEXT:
        return col.data.astype(np.int64) + 1, len(col.categories) + 1
    uniq, inv = np.unique(col.data[col.valid], return_inverse=True)
    ids = np.zeros(len(col), dtype=np.int64)
    ids[col.valid] = inv.reshape(-1) + 1
    return ids, len(uniq) + 1


def _group_ids(cols: Sequence[Column], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-row group id and the first row index of each group."""
    composite = np.zeros(n, dtype=np.int64)
    for col in cols:
        ids, card = _factorize(col)
        composite = composite * card + ids
        _, composite = np.unique(composite, return_inverse=True)
        composite = composite.reshape(-1).astype(np.int64)
    if not cols:
        composite = np.zeros(n, dtype=np.int64)
    uniq, first = np.unique(composite, return_index=True)
    return composite, first


def _value_at(col: Column, i: int):
    if col.type == TEXT:
        code = int(col.data[i])
        return col.categories[code] if code >= 0 else None
    if not col.valid[i]:
        return None
    return col.data[i].item()


def _segment_sums(values: np.ndarray, gids: np.ndarray, n_groups: int, square: bool) -> list:
    """Exact per-group sums (of squares, if ``square``) as Python numbers."""
    if len(values) == 0:
        return [0] * n_groups
    if values.dtype.kind != "f":
        peak = max(abs(int(values.max())), abs(int(values.min())))
        bound = peak * peak if square else peak
        if bound * len(values) < _SAFE:
            out = np.zeros(n_groups, dtype=np.int64)
            np.add.at(out, gids, values * values if square else values)
            return out.tolist()
        conv = int
    else:
        conv = Fraction
    order = np.argsort(gids, kind="stable")
    bounds = np.searchsorted(gids[order], np.arange(n_groups + 1))
    ordered = values[order].tolist()
    out = []
    for g in range(n_groups):
        seg = (conv(v) for v in ordered[bounds[g]:bounds[g + 1]])
        out.append(sum((v * v for v in seg), conv(0)) if square else sum(seg, conv(0)))
    return out


def _extreme(values: np.ndarray, gids: np.ndarray, counts: np.ndarray, n_groups: int, fn) -> list:
    if values.dtype.kind == "f":
        out = np.full(n_groups, np.inf if fn is np.minimum else -np.inf)
    else:
        info = np.iinfo(np.int64)
        out = np.full(n_groups, info.max if fn is np.minimum else info.min, dtype=np.int64)
    fn.at(out, gids, values)
    return [v if c else None for v, c in zip(out.tolist(), counts.tolist())]


def partial_aggregate(frame: Frame, keys: Sequence[str], aggs: Sequence[AggregateSpec]) -> PartialAggregate:
    key_names = tuple(frame.resolve(k) for k in keys)
    key_cols = [frame.column(k) for k in key_names]
    specs = tuple(aggs)
    needs: dict[str, set[str]] = {}
    input_types: dict[str, str] = {}
    for spec in specs:
        if spec.input_field is None:
            continue
        name = frame.resolve(spec.input_field)
        col = frame.column(name)
        if col.type == TEXT and spec.function not in ("count", "count_null"):
            raise AggregateOnTextError(name)
        input_types[spec.input_field] = col.type
        needs.setdefault(spec.input_field, set()).add(spec.function)

    n = frame.row_count
    gids, first = _group_ids(key_cols, n)
    n_groups = len(first)
    rows = np.bincount(gids, minlength=n_groups).tolist() if n else []
    per_field: dict[str, list[FieldState]] = {}
    for field_name, functions in needs.items():
        col = frame.column(field_name)
        valid = col.valid
        g_valid = gids[valid]
        counts = np.bincount(g_valid, minlength=n_groups)
        nulls = np.bincount(gids[~valid], minlength=n_groups).tolist()
        states = [FieldState(c, z) for c, z in zip(counts.tolist(), nulls)]
        if col.type != TEXT:
            values = col.data[valid]
            if functions & {"sum", "mean", "std_sample"}:
                for st, s in zip(states, _segment_sums(values, g_valid, n_groups, False)):
                    st.sum = s
            if "std_sample" in functions:
                for st, s in zip(states, _segment_sums(values, g_valid, n_groups, True)):
                    st.sumsq = s
            if "min" in functions:
                for st, v in zip(states, _extreme(values, g_valid, counts, n_groups, np.minimum)):
                    st.min = v
            if "max" in functions:
                for st, v in zip(states, _extreme(values, g_valid, counts, n_groups, np.maximum)):
                    st.max = v
        per_field[field_name] = states

    groups: dict[tuple, GroupState] = {}
    for g, row in enumerate(first.tolist()):
        key = tuple(_value_at(c, row) for c in key_cols)
        groups[key] = GroupState(rows[g], {f: states[g] for f, states in per_field.items()})
    return PartialAggregate(key_names, tuple(c.type for c in key_cols), specs, input_types, groups)


def merge_partials(parts: Sequence[PartialAggregate]) -> PartialAggregate:
    if not parts:
        raise ValidationError("merge_partials needs at least one partial")
    head = parts[0]
    groups: dict[tuple, GroupState] = {}
    for part in parts:
        if part.keys != head.keys or part.specs != head.specs:
            raise ValidationError("cannot merge partials with different keys or aggregates")
        for key, state in part.groups.items():
            groups[key] = groups[key].merge(state) if key in groups else state
    return PartialAggregate(head.keys, head.key_types, head.specs, dict(head.input_types), groups)


def _sort_key(key: tuple) -> tuple:
    return tuple((v is None, v if v is not None else 0) for v in key)


def _output_type(spec: AggregateSpec, input_type: str | None) -> str:
    if spec.function in ("count", "count_null"):
        return INTEGER
    if spec.function == "std_sample":
        return REAL
    if spec.function == "mean":
        return MONEY if input_type == MONEY else REAL
    if spec.function == "sum" and input_type in INT_TYPES:
        return MONEY if input_type == MONEY else INTEGER
    return input_type  # min/max keep the input type; real sums stay real


def _finish(spec: AggregateSpec, out_type: str, state: GroupState):
    if spec.input_field is None:
        return state.rows
    st = state.fields[spec.input_field]
    fn = spec.function
    if fn == "count":
        return st.n
    if fn == "count_null":
        return st.nulls
    if fn == "sum":
        return float(st.sum) if out_type == REAL else st.sum
    if fn == "min":
        return st.min
    if fn == "max":
        return st.max
    if fn == "mean":
        if st.n == 0:
            return None
        mean = Fraction(st.sum) / st.n
        return round_half_up(mean) if out_type == MONEY else float(mean)
    return sample_std(st.n, st.sum, st.sumsq)


def finalize(partial: PartialAggregate, roles: dict[str, str] | None = None) -> Frame:
    ordered = sorted(partial.groups, key=_sort_key)
    columns = []
    for i, (name, ktype) in enumerate(zip(partial.keys, partial.key_types)):
        columns.append((name, Column.from_values(ktype, [k[i] for k in ordered])))
    for spec in partial.specs:
        out_type = _output_type(spec, partial.input_types.get(spec.input_field))
        values = [_finish(spec, out_type, partial.groups[k]) for k in ordered]
        columns.append((spec.output_name, Column.from_values(out_type, values)))
    kept_roles = {r: c for r, c in (roles or {}).items() if c in partial.keys}
    return Frame(columns, kept_roles)


def group_aggregate(frame: Frame, keys: Sequence[str], aggs: Sequence[AggregateSpec]) -> Frame:
    """One row per distinct key tuple, ascending by key (nulls last)."""
    return finalize(partial_aggregate(frame, keys, aggs), frame.roles)


def parallel_group_aggregate(frame: Frame, keys: Sequence[str], aggs: Sequence[AggregateSpec],
                             partitions: int = 4, max_workers: int | None = None) -> Frame:
    """``group_aggregate`` over contiguous row partitions, merged exactly."""
    partitions = max(1, partitions)
    step = max(1, math.ceil(frame.row_count / partitions))
    chunks = [frame.slice(s, s + step) for s in range(0, frame.row_count, step)] or [frame]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        parts = list(pool.map(lambda f: partial_aggregate(f, keys, aggs), chunks))
    return finalize(merge_partials(parts), frame.roles)
