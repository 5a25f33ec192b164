"""Descriptive statistics over numeric columns.

Sums and sums of squares are exact Python integers, so results do not
depend on row order or on how a column was partitioned. Floats appear only
at the final division / square root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from boat.engine.frame import REAL, TEXT, Column
from boat.errors import (
    AggregateOnTextError,
    EmptyColumnError,
    InvalidBinCountError,
    InvalidPercentileError,
    NonPositiveBinWidthError,
)

_SAFE = 2**62


def numeric_values(values: Column | Sequence[Any] | np.ndarray, name: str = "<values>") -> np.ndarray:
    """Non-null values of a numeric column, list (``None`` = null) or array."""
    if isinstance(values, Column):
        if values.type == TEXT:
            raise AggregateOnTextError(name)
        return values.valid_values()
    if isinstance(values, np.ndarray):
        if values.dtype.kind in "iu":
            return values.astype(np.int64, copy=False)
        if values.dtype.kind == "f":
            return values[~np.isnan(values)]
        raise AggregateOnTextError(name)
    kept = [v for v in values if v is not None]
    if any(isinstance(v, str) for v in kept):
        raise AggregateOnTextError(name)
    if all(isinstance(v, (int, np.integer)) for v in kept):
        return np.array(kept, dtype=np.int64)
    arr = np.array(kept, dtype=np.float64)
    return arr[~np.isnan(arr)]


def exact_sum(arr: np.ndarray) -> int | Fraction:
    if len(arr) == 0:
        return 0
    if arr.dtype.kind == "f":
        return sum((Fraction(x) for x in arr.tolist()), Fraction(0))
    peak = max(abs(int(arr.max())), abs(int(arr.min())))
    if peak * len(arr) < _SAFE:
        return int(arr.sum())
    return sum(arr.tolist())


def exact_sum_squares(arr: np.ndarray) -> int | Fraction:
    if len(arr) == 0:
        return 0
    if arr.dtype.kind == "f":
        return sum((Fraction(x) ** 2 for x in arr.tolist()), Fraction(0))
    peak = max(abs(int(arr.max())), abs(int(arr.min())))
    if peak * peak * len(arr) < _SAFE:
        return int(np.dot(arr, arr))
    return sum(v * v for v in arr.tolist())


def sample_std(n: int, total, total_sq) -> float | None:
    """Sample standard deviation from exact ``n``, ``Σx`` and ``Σx²``."""
    if n < 2:
        return None
    var = Fraction(n * total_sq - total * total, n * (n - 1))
    return math.sqrt(var) if var > 0 else 0.0


def round_half_up(value: Fraction | int) -> int:
    """Nearest integer, halves rounded away from zero."""
    value = Fraction(value)
    sign = -1 if value < 0 else 1
    a = abs(value)
    return sign * ((2 * a.numerator + a.denominator) // (2 * a.denominator))


def _py(v):
    return v.item() if isinstance(v, np.generic) else v


@dataclass(frozen=True)
class Stats:
    n: int
    sum: int | Fraction | None
    mean: Fraction | None
    std_sample: float | None
    min: Any
    max: Any
    median: Any

    @property
    def mean_rounded(self) -> int | None:
        """Mean at unit precision (cents, for money columns)."""
        return None if self.mean is None else round_half_up(self.mean)

    @property
    def std_rounded(self) -> int | None:
        return None if self.std_sample is None else round_half_up(Fraction(self.std_sample))


def describe(values, name: str = "<values>") -> Stats:
    arr = numeric_values(values, name)
    n = len(arr)
    if n == 0:
        return Stats(0, None, None, None, None, None, None)
    total = exact_sum(arr)
    mid = (n - 1) // 2
    return Stats(
        n=n,
        sum=total,
        mean=Fraction(total) / n,
        std_sample=sample_std(n, total, exact_sum_squares(arr)),
        min=_py(arr.min()),
        max=_py(arr.max()),
        median=_py(np.partition(arr, mid)[mid]),
    )


@dataclass(frozen=True)
class Histogram:
    """Bin ``i`` covers ``[lo + i*w, lo + (i+1)*w)``."""

    lo: Any
    bin_width: Any
    counts: tuple[int, ...]
    underflow: int = 0
    overflow: int = 0

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return self.underflow + self.overflow + sum(self.counts)

    @property
    def hi(self):
        return self.lo + self.k * self.bin_width

    def left_edges(self) -> list:
        return [self.lo + i * self.bin_width for i in range(self.k)]


def histogram(values, lo, bin_width, k: int, name: str = "<values>") -> Histogram:
    if not bin_width > 0:
        raise NonPositiveBinWidthError(f"bin width must be positive, got {bin_width!r}")
    if k < 1:
        raise InvalidBinCountError(f"bin count must be >= 1, got {k!r}")
    arr = numeric_values(values, name)
    below = arr < lo
    idx = (arr[~below] - lo) // bin_width
    over = idx >= k
    counts = np.bincount(idx[~over].astype(np.intp), minlength=k) if len(idx) else np.zeros(k, np.int64)
    return Histogram(lo, bin_width, tuple(int(c) for c in counts),
                     int(np.count_nonzero(below)), int(np.count_nonzero(over)))


def fraction_below(values, threshold, name: str = "<values>") -> float:
    """Share of non-null values strictly less than ``threshold``."""
    arr = numeric_values(values, name)
    if len(arr) == 0:
        raise EmptyColumnError(f"fraction_below on empty column {name}")
    return int(np.count_nonzero(arr < threshold)) / len(arr)


def _as_fraction(p) -> Fraction:
    return Fraction(repr(p)) if isinstance(p, float) else Fraction(p)


def percentile(values, p, name: str = "<values>"):
    """Nearest-rank percentile: sorted value at 1-based rank ``ceil(p/100 * n)``."""
    if isinstance(p, bool) or not (0 <= p <= 100):
        raise InvalidPercentileError(f"percentile must be in [0, 100], got {p!r}")
    arr = numeric_values(values, name)
    n = len(arr)
    if n == 0:
        raise EmptyColumnError(f"percentile on empty column {name}")
    rank = max(1, math.ceil(_as_fraction(p) * n / 100))
    return _py(np.partition(arr, rank - 1)[rank - 1])
