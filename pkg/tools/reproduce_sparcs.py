"""Compare boat results on real SPARCS inpatient extracts against published figures.

Download the New York SPARCS "Hospital Inpatient Discharges (De-Identified)"
CSV for 2014 (and optionally 2009) from health.data.ny.gov, then run:

    python tools/reproduce_sparcs.py --sparcs-2014 2014.csv [--sparcs-2009 2009.csv]

or set BOAT_SPARCS_2014 / BOAT_SPARCS_2009 and run the acceptance suite.
Each target prints observed value, target and tolerance. Nothing is
adjusted to fit: a miss is reported as a miss. The hip cohort depends on
which procedure label selects it, so the label is a flag.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from boat.analytics import cap_analysis
from boat.engine import EQUALS, Clause, agg, filter, group_aggregate
from boat.ingest import load_schema_file, parse_file

HIP_PROCEDURE = "HIP REPLACEMENT,TOT/PRT"


@dataclass
class Result:
    name: str
    observed: float
    target: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return abs(self.observed - self.target) <= self.tolerance

    def __str__(self) -> str:
        flag = "ok" if self.ok else "MISS"
        return f"{self.name}: {self.observed:,.2f} vs {self.target:,.2f} (+/- {self.tolerance:,.2f}) {flag}"


def _liveborn_total(path: str, schema, year: int) -> int:
    frame, _ = parse_file(schema, path)
    sliced = filter(frame, [Clause("year", EQUALS, year), Clause("age_group", EQUALS, "0 to 17"),
                            Clause("diagnosis", EQUALS, "LIVEBORN")])
    (row,) = group_aggregate(sliced, [], [agg("sum", "cost")]).to_rows()
    return row[0]


def reproduce(path_2014: str, path_2009: str | None = None, hip_procedure: str = HIP_PROCEDURE,
              schema_path: str | None = None) -> list[Result]:
    schema = load_schema_file(schema_path)
    frame, report = parse_file(schema, path_2014)
    print(f"2014: {report.rows_ok} rows accepted, {report.rows_quarantined} quarantined", file=sys.stderr)
    hip = [Clause("year", EQUALS, 2014), Clause("procedure", EQUALS, hip_procedure)]
    cap = cap_analysis(frame, hip, threshold=3_000_000)
    results = [
        Result("hip cohort n", cap.n, 168_676, 0),
        Result("hip mean ($)", cap.mean / 100, 22_700, 100),
        Result("hip std ($)", (cap.std_sample or 0) / 100, 20_900, 100),
        Result("hip fraction below $30,000 (%)", 100 * cap.fraction_below, 88, 0.5),
    ]
    del frame
    total = _liveborn_total(path_2014, schema, 2014)
    results.append(Result("LIVEBORN 0-17 total 2014 ($B)", total / 1e11, 1.45, 0.0145))
    if path_2009:
        total = _liveborn_total(path_2009, schema, 2009)
        results.append(Result("LIVEBORN 0-17 total 2009 ($B)", total / 1e11, 1.1, 0.011))
    return results


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sparcs-2014", required=True)
    p.add_argument("--sparcs-2009")
    p.add_argument("--hip-procedure", default=HIP_PROCEDURE)
    p.add_argument("--schema")
    args = p.parse_args(argv)
    results = reproduce(args.sparcs_2014, args.sparcs_2009, args.hip_procedure, args.schema)
    for r in results:
        print(r)
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
