"""Seeded SPARCS-like discharge CSV generator.

Costs are lognormal per stratum (parameters in log-cents). A fraction of
rows can be deliberately corrupted; the ledger records exactly what was
emitted so ingestion and aggregation can be checked against it.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import BinaryIO

import numpy as np

from boat.errors import ProfileValidationError
from boat.ingest.money import format_money

HEADER = (
    "Discharge Year",
    "Hospital County",
    "Facility Name",
    "Age Group",
    "CCS Diagnosis Description",
    "CCS Procedure Description",
    "Total Costs",
)
CORRUPTION_MODES = ("non_numeric_cost", "blank_year", "negative_cost")
MAX_DIRTY_RATE = 0.2


@dataclass(frozen=True)
class Stratum:
    county: str
    facility: str
    age_group: str
    diagnosis: str
    procedure: str
    cases: tuple[int, ...]
    cost_log_mean: float
    cost_log_sigma: float

    @property
    def labels(self) -> tuple[str, str, str, str, str]:
        return (self.county, self.facility, self.age_group, self.diagnosis, self.procedure)


@dataclass(frozen=True)
class CohortProfile:
    years: tuple[int, ...]
    strata: tuple[Stratum, ...]
    seed: int = 0
    dirty_row_rate: float = 0.0

    def __post_init__(self):
        validate_profile(self)

    @property
    def total_rows(self) -> int:
        return sum(sum(s.cases) for s in self.strata)

    def with_seed(self, seed: int) -> CohortProfile:
        return CohortProfile(self.years, self.strata, seed, self.dirty_row_rate)

    def with_dirty_rate(self, rate: float) -> CohortProfile:
        return CohortProfile(self.years, self.strata, self.seed, rate)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "dirty_row_rate": self.dirty_row_rate,
            "years": list(self.years),
            "strata": [
                {
                    "county": s.county, "facility": s.facility, "age_group": s.age_group,
                    "diagnosis": s.diagnosis, "procedure": s.procedure, "cases": list(s.cases),
                    "cost_log_mean": s.cost_log_mean, "cost_log_sigma": s.cost_log_sigma,
                }
                for s in self.strata
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> CohortProfile:
        try:
            strata = tuple(
                Stratum(s["county"], s["facility"], s["age_group"], s["diagnosis"], s["procedure"],
                        tuple(s["cases"]), float(s["cost_log_mean"]), float(s["cost_log_sigma"]))
                for s in d["strata"]
            )
            return cls(tuple(d["years"]), strata, d.get("seed", 0), float(d.get("dirty_row_rate", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProfileValidationError(f"malformed profile: {exc!r}") from exc


def validate_profile(p: CohortProfile) -> None:
    if not p.years:
        raise ProfileValidationError("profile needs at least one year")
    if any(not isinstance(y, int) or not 1990 <= y <= 2100 for y in p.years):
        raise ProfileValidationError(f"years must be integers in [1990, 2100]: {p.years}")
    if list(p.years) != sorted(set(p.years)):
        raise ProfileValidationError("years must be strictly ascending")
    if not isinstance(p.seed, int) or not 0 <= p.seed < 2**64:
        raise ProfileValidationError(f"seed must be a 64-bit unsigned integer, got {p.seed!r}")
    if not 0.0 <= p.dirty_row_rate <= MAX_DIRTY_RATE:
        raise ProfileValidationError(f"dirty_row_rate must be in [0, {MAX_DIRTY_RATE}], got {p.dirty_row_rate}")
    for i, s in enumerate(p.strata):
        if len(s.cases) != len(p.years):
            raise ProfileValidationError(f"stratum {i}: {len(s.cases)} case counts for {len(p.years)} years")
        if any(not isinstance(c, int) or c < 0 for c in s.cases):
            raise ProfileValidationError(f"stratum {i}: case counts must be non-negative integers")
        if not s.cost_log_sigma > 0 or not math.isfinite(s.cost_log_sigma):
            raise ProfileValidationError(f"stratum {i}: cost_log_sigma must be positive")
        if not math.isfinite(s.cost_log_mean):
            raise ProfileValidationError(f"stratum {i}: cost_log_mean must be finite")
        if any(not isinstance(t, str) or not t for t in s.labels):
            raise ProfileValidationError(f"stratum {i}: labels must be non-empty text")


def load_profile(path: str | os.PathLike) -> CohortProfile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ProfileValidationError(f"{path}: not valid JSON: {exc}") from exc
    return CohortProfile.from_dict(data)


def reference_profile() -> CohortProfile:
    """Bundled profile shaped like the New York 2009-2014 extracts."""
    text = resources.files("boat.synth").joinpath("reference_profile.json").read_text(encoding="utf-8")
    return CohortProfile.from_dict(json.loads(text))


@dataclass
class GenerationLedger:
    """Exact record of a generator run (valid rows only in counts/sums)."""

    counts: dict[tuple[int, int], int] = field(default_factory=dict)  # (stratum, year) -> rows
    cost_sums: dict[tuple[int, int], int] = field(default_factory=dict)  # (stratum, year) -> cents
    corrupted: int = 0
    corrupted_by_mode: dict[str, int] = field(default_factory=lambda: dict.fromkeys(CORRUPTION_MODES, 0))

    @property
    def valid_rows(self) -> int:
        return sum(self.counts.values())

    @property
    def rows_emitted(self) -> int:
        return self.valid_rows + self.corrupted

    def to_dict(self, profile: CohortProfile) -> dict:
        cells = []
        for (i, year), n in sorted(self.counts.items()):
            s = profile.strata[i]
            cells.append({"stratum": i, "county": s.county, "facility": s.facility,
                          "age_group": s.age_group, "diagnosis": s.diagnosis,
                          "procedure": s.procedure, "year": year, "count": n,
                          "cost_sum_cents": self.cost_sums[(i, year)]})
        return {"seed": profile.seed, "rows_emitted": self.rows_emitted, "valid_rows": self.valid_rows,
                "corrupted": self.corrupted, "corrupted_by_mode": dict(self.corrupted_by_mode),
                "cells": cells}


def write_csv(profile: CohortProfile, out: BinaryIO) -> GenerationLedger:
    """Stream the profile's rows as CSV bytes into ``out``.

    Draw order is fixed (year, then stratum; costs, corruption flags, modes),
    so a given ``(profile, seed)`` always yields identical bytes.
    """
    rng = np.random.default_rng(profile.seed)
    ledger = GenerationLedger()
    text = io.TextIOWrapper(out, encoding="utf-8", newline="")
    try:
        writer = csv.writer(text, lineterminator="\r\n")
        writer.writerow(HEADER)
        rate = profile.dirty_row_rate
        for y_idx, year in enumerate(profile.years):
            for s_idx, s in enumerate(profile.strata):
                n = s.cases[y_idx]
                costs = np.rint(rng.lognormal(s.cost_log_mean, s.cost_log_sigma, n)).astype(np.int64).tolist()
                dirty = (rng.random(n) < rate).tolist() if rate > 0 else [False] * n
                modes = rng.integers(0, len(CORRUPTION_MODES), n).tolist() if rate > 0 else [0] * n
                ok = total = 0
                for cost, bad, mode in zip(costs, dirty, modes):
                    year_txt, cost_txt = str(year), format_money(cost)
                    if bad:
                        kind = CORRUPTION_MODES[mode]
                        ledger.corrupted += 1
                        ledger.corrupted_by_mode[kind] += 1
                        if kind == "non_numeric_cost":
                            cost_txt = "N/A"
                        elif kind == "blank_year":
                            year_txt = ""
                        else:
                            cost_txt = "-" + format_money(max(cost, 1))
                    else:
                        ok += 1
                        total += cost
                    writer.writerow((year_txt, *s.labels, cost_txt))
                ledger.counts[(s_idx, year)] = ok
                ledger.cost_sums[(s_idx, year)] = total
        text.flush()
    finally:
        text.detach()
    return ledger


def generate(profile: CohortProfile) -> tuple[bytes, GenerationLedger]:
    buf = io.BytesIO()
    ledger = write_csv(profile, buf)
    return buf.getvalue(), ledger


def generate_file(profile: CohortProfile, path: str | os.PathLike) -> GenerationLedger:
    with open(path, "wb") as fh:
        return write_csv(profile, fh)
