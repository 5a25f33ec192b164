"""Immutable columnar storage.

Numeric columns hold ``int64`` values (``float64`` for ``real``) plus a
validity mask; text columns are dictionary encoded as ``int32`` codes into a
tuple of categories, with code ``-1`` for null. Arrays are marked read-only
on construction, and every operation returns a new object.
"""

from __future__ import annotations

from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from boat.errors import DataError, FieldNotFoundError, ValidationError

TEXT = "text"
INTEGER = "integer"
YEAR = "year"
MONEY = "money"
REAL = "real"

COLUMN_TYPES = (TEXT, INTEGER, YEAR, MONEY, REAL)
INT_TYPES = frozenset({INTEGER, YEAR, MONEY})
NUMERIC_TYPES = frozenset({INTEGER, YEAR, MONEY, REAL})


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class Column:
    __slots__ = ("type", "data", "valid", "categories")

    def __init__(self, type: str, data: np.ndarray, valid: np.ndarray | None = None,
                 categories: Sequence[str] | None = None):
        if type not in COLUMN_TYPES:
            raise ValidationError(f"unknown column type {type!r}")
        self.type = type
        if type == TEXT:
            if categories is None:
                raise ValidationError("text column needs categories")
            self.data = _frozen(np.asarray(data, dtype=np.int32))
            self.valid = _frozen(self.data >= 0)
            self.categories = tuple(categories)
        else:
            dtype = np.float64 if type == REAL else np.int64
            self.data = _frozen(np.asarray(data, dtype=dtype))
            if valid is None:
                valid = np.ones(len(self.data), dtype=bool)
            self.valid = _frozen(np.asarray(valid, dtype=bool))
            if len(self.valid) != len(self.data):
                raise ValidationError("validity mask length differs from data length")
            self.categories = None

    @classmethod
    def from_values(cls, type: str, values: Iterable[Any]) -> Column:
        """Build a column from Python values, ``None`` meaning null."""
        values = list(values)
        if type == TEXT:
            index: dict[str, int] = {}
            codes = np.empty(len(values), dtype=np.int32)
            for i, v in enumerate(values):
                if v is None:
                    codes[i] = -1
                else:
                    codes[i] = index.setdefault(str(v), len(index))
            return cls(TEXT, codes, categories=list(index))
        valid = np.array([v is not None for v in values], dtype=bool)
        if type == REAL:
            data = np.array([float(v) if v is not None else 0.0 for v in values], dtype=np.float64)
        else:
            try:
                data = np.array([int(v) if v is not None else 0 for v in values], dtype=np.int64)
            except OverflowError:
                raise DataError(f"{type} value outside the 64-bit integer range") from None
        return cls(type, data, valid)

    def __len__(self) -> int:
        return len(self.data)

    @property
    def is_numeric(self) -> bool:
        return self.type in NUMERIC_TYPES

    @property
    def null_count(self) -> int:
        return int(len(self.valid) - np.count_nonzero(self.valid))

    @property
    def nbytes(self) -> int:
        total = self.data.nbytes
        if self.type == TEXT:
            total += sum(len(c.encode("utf-8")) for c in self.categories)
        else:
            total += self.valid.nbytes
        return total

    def to_list(self) -> list:
        if self.type == TEXT:
            cats = self.categories
            return [cats[c] if c >= 0 else None for c in self.data.tolist()]
        return [v if ok else None for v, ok in zip(self.data.tolist(), self.valid.tolist())]

    def take(self, indices: np.ndarray) -> Column:
        indices = np.asarray(indices, dtype=np.intp)
        if self.type == TEXT:
            return Column(TEXT, self.data[indices], categories=self.categories)
        return Column(self.type, self.data[indices], self.valid[indices])

    def valid_values(self) -> np.ndarray:
        """Non-null values, in row order."""
        if self.type == TEXT:
            raise ValidationError("valid_values() is for numeric columns")
        return self.data[self.valid]

    def text_ranks(self) -> np.ndarray:
        """Per-row rank of the text value in ascending order; nulls rank last."""
        order = sorted(range(len(self.categories)), key=self.categories.__getitem__)
        rank_of_code = np.empty(len(self.categories) + 1, dtype=np.int64)
        rank_of_code[np.asarray(order, dtype=np.int64)] = np.arange(len(order))
        rank_of_code[-1] = len(order)  # code -1 indexes the last slot
        return rank_of_code[self.data]

    def code_of(self, value: str) -> int:
        try:
            return self.categories.index(value)
        except ValueError:
            return -2  # matches no row, not even nulls

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Column):
            return NotImplemented
        return self.type == other.type and self.to_list() == other.to_list()

    def __repr__(self) -> str:
        return f"Column({self.type}, n={len(self)})"


class Frame:
    """Ordered, named, equal-length columns plus a role -> column-name map."""

    __slots__ = ("_columns", "_roles", "_row_count")

    def __init__(self, columns: Mapping[str, Column] | Sequence[tuple[str, Column]],
                 roles: Mapping[str, str] | None = None, row_count: int | None = None):
        items = list(columns.items()) if isinstance(columns, Mapping) else list(columns)
        cols: dict[str, Column] = {}
        for name, col in items:
            if name in cols:
                raise ValidationError(f"duplicate column name {name!r}")
            cols[name] = col
        lengths = {len(c) for c in cols.values()}
        if len(lengths) > 1:
            raise ValidationError(f"columns have unequal lengths {sorted(lengths)}")
        n = lengths.pop() if lengths else (row_count or 0)
        if row_count is not None and row_count != n:
            raise ValidationError(f"row_count {row_count} does not match column length {n}")
        self._columns = cols
        self._row_count = n
        self._roles = {r: c for r, c in (roles or {}).items() if c in cols}

    @classmethod
    def from_dict(cls, data: Mapping[str, tuple[str, Sequence[Any]]],
                  roles: Mapping[str, str] | None = None) -> Frame:
        """``{"name": ("money", [1, 2, None])}`` -> Frame."""
        return cls([(name, Column.from_values(t, vals)) for name, (t, vals) in data.items()], roles)

    @property
    def row_count(self) -> int:
        return self._row_count

    def __len__(self) -> int:
        return self._row_count

    @property
    def names(self) -> list[str]:
        return list(self._columns)

    @property
    def roles(self) -> dict[str, str]:
        return dict(self._roles)

    @property
    def nbytes(self) -> int:
        return sum(c.nbytes for c in self._columns.values())

    def resolve(self, name: str) -> str:
        """Column name for ``name``, which may be a column name or a role."""
        if name in self._columns:
            return name
        if name in self._roles:
            return self._roles[name]
        raise FieldNotFoundError(name)

    def column(self, name: str) -> Column:
        return self._columns[self.resolve(name)]

    def __getitem__(self, name: str) -> Column:
        return self.column(name)

    def __contains__(self, name: str) -> bool:
        return name in self._columns or name in self._roles

    def items(self):
        return self._columns.items()

    def take(self, indices: np.ndarray) -> Frame:
        indices = np.asarray(indices, dtype=np.intp)
        return Frame([(n, c.take(indices)) for n, c in self._columns.items()], self._roles,
                     row_count=len(indices))

    def slice(self, start: int, stop: int) -> Frame:
        return self.take(np.arange(start, min(stop, self._row_count)))

    def to_rows(self) -> list[tuple]:
        lists = [c.to_list() for c in self._columns.values()]
        return list(zip(*lists)) if lists else [() for _ in range(self._row_count)]

    def to_dicts(self) -> list[dict[str, Any]]:
        names = self.names
        return [dict(zip(names, row)) for row in self.to_rows()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (self.names == other.names and self._row_count == other._row_count
                and all(self._columns[n] == other._columns[n] for n in self.names))

    def __repr__(self) -> str:
        cols = ", ".join(f"{n}:{c.type}" for n, c in self._columns.items())
        return f"Frame({self._row_count} rows; {cols})"
