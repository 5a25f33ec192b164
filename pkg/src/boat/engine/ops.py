"""Row selection and ordering: filter, sort_by, top_n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from boat.engine.frame import TEXT, Column, Frame
from boat.errors import AggregateOnTextError, PredicateTypeError, ValidationError

EQUALS = "equals"
ONE_OF = "one_of"
BETWEEN = "between"
OPS = (EQUALS, ONE_OF, BETWEEN)


@dataclass(frozen=True)
class Clause:
    field: str
    op: str
    value: Any

    def __post_init__(self):
        if self.op not in OPS:
            raise PredicateTypeError(f"unknown predicate op {self.op!r}")
        if self.op == ONE_OF:
            object.__setattr__(self, "value", tuple(self.value))
        elif self.op == BETWEEN:
            lo, hi = self.value
            object.__setattr__(self, "value", (lo, hi))

    def __str__(self) -> str:
        if self.op == EQUALS:
            return f"{self.field}={self.value}"
        if self.op == ONE_OF:
            return f"{self.field} in " + "|".join(str(v) for v in self.value)
        return f"{self.field} between {self.value[0]},{self.value[1]}"


Predicate = Sequence[Clause]


def describe_predicate(predicate: Predicate) -> str:
    return " AND ".join(str(c) for c in predicate) if predicate else "<all rows>"


def _check_scalar(col: Column, field: str, value: Any) -> None:
    if col.type == TEXT:
        if not isinstance(value, str):
            raise PredicateTypeError(f"{field!r} is text but predicate value is {value!r}")
    elif isinstance(value, (str, bool)) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise PredicateTypeError(f"{field!r} is {col.type} but predicate value is {value!r}")


def _clause_mask(col: Column, clause: Clause) -> np.ndarray:
    if clause.op == BETWEEN:
        if col.type == TEXT:
            raise PredicateTypeError(f"'between' is not defined on text field {clause.field!r}")
        lo, hi = clause.value
        _check_scalar(col, clause.field, lo)
        _check_scalar(col, clause.field, hi)
        return col.valid & (col.data >= lo) & (col.data <= hi)
    wanted = clause.value if clause.op == ONE_OF else (clause.value,)
    for v in wanted:
        _check_scalar(col, clause.field, v)
    if col.type == TEXT:
        codes = [col.code_of(v) for v in wanted]
        return np.isin(col.data, codes)
    return col.valid & np.isin(col.data, list(wanted))


def filter(frame: Frame, predicate: Predicate = ()) -> Frame:
    """Rows satisfying every clause, in their original order."""
    if not predicate:
        return frame
    mask = np.ones(frame.row_count, dtype=bool)
    for clause in predicate:
        mask &= _clause_mask(frame.column(clause.field), clause)
    return frame.take(np.flatnonzero(mask))


def _order_keys(col: Column, descending: bool = False) -> list[np.ndarray]:
    """Keys for ``np.lexsort``, most significant first; nulls always last."""
    if col.type == TEXT:
        ranks = col.text_ranks()
        if descending:
            nulls = ~col.valid
            return [nulls, np.where(nulls, 0, -ranks)]
        return [ranks]
    values = np.where(col.valid, col.data, 0)
    return [~col.valid, -values if descending else values]


def _lexsort(keys: list[np.ndarray], n: int) -> np.ndarray:
    if not keys:
        return np.arange(n)
    return np.lexsort(keys[::-1])


def sort_by(frame: Frame, key: str, order: str = "asc") -> Frame:
    """Stable sort on one field; nulls go last in either direction."""
    if order not in ("asc", "desc"):
        raise ValidationError(f"order must be 'asc' or 'desc', got {order!r}")
    col = frame.column(key)
    return frame.take(_lexsort(_order_keys(col, order == "desc"), frame.row_count))


def top_n(frame: Frame, value_field: str, n: int) -> Frame:
    """The ``n`` rows with the largest ``value_field``, descending.

    Ties are broken by the text columns ascending (frame order), then by the
    remaining columns ascending, so the result does not depend on input row
    order. Rows with a null value rank after all others.
    """
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    name = frame.resolve(value_field)
    col = frame.column(name)
    if col.type == TEXT:
        raise AggregateOnTextError(name)
    keys = _order_keys(col, descending=True)
    others = [(c_name, c) for c_name, c in frame.items() if c_name != name]
    for _, c in sorted(others, key=lambda item: item[1].type != TEXT):
        keys.extend(_order_keys(c))
    order = _lexsort(keys, frame.row_count)
    return frame.take(order[:n])
