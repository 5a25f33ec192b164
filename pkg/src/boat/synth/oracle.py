"""Naive reference implementations used as test oracles.

Everything here works on plain lists of dicts with straightforward loops
and shares no code with ``boat.engine`` or ``boat.ingest``. Slow by design;
meant for at most ~100k rows.
"""

from __future__ import annotations

import csv
import io
import math
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation, localcontext
from fractions import Fraction

ROLE_HEADERS = {
    "year": "Discharge Year",
    "county": "Hospital County",
    "facility": "Facility Name",
    "age_group": "Age Group",
    "diagnosis": "CCS Diagnosis Description",
    "procedure": "CCS Procedure Description",
    "cost": "Total Costs",
}


def _cents(raw: str):
    raw = raw.strip().lstrip("$").replace(",", "")
    try:
        d = Decimal(raw)
    except InvalidOperation:
        return None
    if not d.is_finite() or d < 0 or d != d.quantize(Decimal("0.01")):
        return None
    return int(d * 100)


def read_records(data: bytes) -> tuple[list[dict], int]:
    """Rows of a default-schema CSV keyed by role; bad rows are skipped and counted."""
    reader = csv.DictReader(io.StringIO(data.decode("utf-8-sig"), newline=""))
    out, skipped = [], 0
    for row in reader:
        rec = {role: row[header] for role, header in ROLE_HEADERS.items()}
        cost = _cents(rec["cost"])
        year = rec["year"].strip()
        if cost is None or not year.isdigit() or not 1990 <= int(year) <= 2100 or not rec["age_group"] \
                or not rec["diagnosis"] or not rec["procedure"]:
            skipped += 1
            continue
        rec["year"] = int(year)
        rec["cost"] = cost
        rec["county"] = rec["county"] or None
        rec["facility"] = rec["facility"] or None
        out.append(rec)
    return out, skipped


def naive_filter(rows, clauses):
    """``clauses``: iterable of (field, op, value) with op equals/one_of/between."""
    out = []
    for r in rows:
        keep = True
        for f, op, value in clauses:
            v = r[f]
            if op == "equals":
                keep = v is not None and v == value
            elif op == "one_of":
                keep = v is not None and v in value
            else:
                keep = v is not None and value[0] <= v <= value[1]
            if not keep:
                break
        if keep:
            out.append(r)
    return out


def _key_order(key):
    return tuple((v is None, v if v is not None else 0) for v in key)


def round_half_up(q: Fraction) -> int:
    with localcontext() as ctx:
        ctx.prec = 200
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return int(d.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _std_two_pass(values) -> float | None:
    n = len(values)
    if n < 2:
        return None
    mean = Fraction(sum(values), n)
    ss = sum((Fraction(v) - mean) ** 2 for v in values)
    return math.sqrt(ss / (n - 1))


def naive_group_aggregate(rows, keys, aggs, money_fields=()):
    """Nested-loop group-by.

    ``aggs`` items expose ``function``, ``input_field``, ``output_name`` (or
    are such triples). Output is a list of dicts ordered by key tuple, nulls
    last. Means of fields in ``money_fields`` are rounded to whole cents.
    """
    specs = [(a.function, a.input_field, a.output_name) if hasattr(a, "function") else tuple(a) for a in aggs]
    distinct = []
    for r in rows:
        k = tuple(r[f] for f in keys)
        if k not in distinct:
            distinct.append(k)
    distinct.sort(key=_key_order)
    out = []
    for k in distinct:
        members = [r for r in rows if tuple(r[f] for f in keys) == k]
        rec = dict(zip(keys, k))
        for fn, field, name in specs:
            if field is None:
                rec[name] = len(members)
                continue
            vals = [m[field] for m in members if m[field] is not None]
            if fn == "count":
                rec[name] = len(vals)
            elif fn == "count_null":
                rec[name] = len(members) - len(vals)
            elif fn == "sum":
                total = 0
                for v in vals:
                    total += v
                rec[name] = total
            elif fn == "mean":
                if not vals:
                    rec[name] = None
                elif field in money_fields:
                    rec[name] = round_half_up(Fraction(sum(vals), len(vals)))
                else:
                    rec[name] = float(Fraction(sum(vals), len(vals)))
            elif fn == "min":
                rec[name] = min(vals) if vals else None
            elif fn == "max":
                rec[name] = max(vals) if vals else None
            elif fn == "std_sample":
                rec[name] = _std_two_pass(vals)
            else:
                raise ValueError(f"unknown aggregate {fn!r}")
        out.append(rec)
    return out


def naive_sort(rows, field, descending=False):
    present = [r for r in rows if r[field] is not None]
    missing = [r for r in rows if r[field] is None]
    return sorted(present, key=lambda r: r[field], reverse=descending) + missing


def naive_top_n(rows, value_field, n, tie_fields):
    """Sort descending by value (nulls last), ties ascending over ``tie_fields``, take n."""
    def key(r):
        v = r[value_field]
        ties = tuple((r[f] is None, r[f] if r[f] is not None else 0) for f in tie_fields)
        return (v is None, -v if v is not None else 0, ties)
    return sorted(rows, key=key)[:n]


def naive_histogram(values, lo, width, k):
    counts = [0] * k
    under = over = 0
    for v in values:
        if v is None:
            continue
        if v < lo:
            under += 1
            continue
        placed = False
        for i in range(k):
            if lo + i * width <= v < lo + (i + 1) * width:
                counts[i] += 1
                placed = True
                break
        if not placed:
            over += 1
    return counts, under, over


def naive_fraction_below(values, threshold):
    vals = [v for v in values if v is not None]
    return sum(1 for v in vals if v < threshold) / len(vals)


def naive_percentile(values, p):
    vals = sorted(v for v in values if v is not None)
    rank = math.ceil(Fraction(str(p)) * len(vals) / 100)
    return vals[max(rank, 1) - 1]


def naive_describe(values):
    """Two-pass float mean and sample std."""
    vals = [v for v in values if v is not None]
    n = len(vals)
    mean = sum(float(v) for v in vals) / n
    std = math.sqrt(sum((float(v) - mean) ** 2 for v in vals) / (n - 1)) if n > 1 else None
    return n, mean, std


def naive_cost_comparison(rows, clauses, group_field, y0, y1, top, skip_top):
    """filter -> total per (label, year) -> sort by y1 desc, label asc -> slice."""
    sliced = naive_filter(rows, clauses)
    totals: dict = {}
    for r in sliced:
        if r["year"] not in (y0, y1):
            continue
        t = totals.setdefault(r[group_field], {y0: 0, y1: 0})
        if r["cost"] is not None:
            t[r["year"]] += r["cost"]
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1][y1], kv[0] is None, kv[0] or ""))
    return [(label, t[y0], t[y1]) for label, t in ranked[skip_top:skip_top + top]]


def naive_trend(rows, clauses, group_field, metric, years, top_k):
    """Per (label, year) count / sum / mean-at-cents; top_k labels by final year."""
    sliced = naive_filter(rows, clauses)
    labels = sorted({r[group_field] for r in sliced if r["year"] in years},
                    key=lambda v: (v is None, v or ""))
    table = {}
    for label in labels:
        series = []
        for y in years:
            cell = [r for r in sliced if r[group_field] == label and r["year"] == y]
            costs = [r["cost"] for r in cell if r["cost"] is not None]
            if metric == "count":
                series.append(len(cell))
            elif metric == "sum":
                series.append(sum(costs))
            else:
                series.append(round_half_up(Fraction(sum(costs), len(costs))) if costs else None)
        table[label] = series
    ranked = sorted(labels, key=lambda lab: (table[lab][-1] is None, -(table[lab][-1] or 0),
                                             lab is None, lab or ""))
    out = []
    for label in ranked[:top_k]:
        vals = table[label]
        first, last = vals[0], vals[-1]
        pct = None
        if first is not None and last is not None and first > 0:
            pct = float(Fraction(100 * (last - first), first))
        out.append((label, vals, pct))
    return out


def naive_cap(rows, clauses, threshold, lo, width, k):
    costs = [r["cost"] for r in naive_filter(rows, clauses) if r["cost"] is not None]
    n = len(costs)
    mean = round_half_up(Fraction(sum(costs), n))
    std = _std_two_pass(costs)
    std_cents = round_half_up(Fraction(std)) if std is not None else None
    below = sum(1 for c in costs if c < threshold) / n
    counts, under, over = naive_histogram(costs, lo, width, k)
    return {"n": n, "mean": mean, "std_sample": std_cents, "std_exact": std, "fraction_below": below,
            "counts": counts, "underflow": under, "overflow": over}
