import io

import numpy as np
import pytest

from boat.engine import Frame
from boat.ingest import default_schema, parse_stream

HEADER = ("Discharge Year,Hospital County,Facility Name,Age Group,CCS Diagnosis Description,"
          "CCS Procedure Description,Total Costs")

ACCEPTANCE_LOG: list[tuple[str, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"[{status}] {name}: {detail}")


@pytest.fixture
def acceptance():
    def record(name, ok, detail=""):
        ACCEPTANCE_LOG.append((name, "PASS" if ok else "FAIL", detail))
        assert ok, f"{name}: {detail}"

    def skip(name, reason):
        ACCEPTANCE_LOG.append((name, "SKIP", reason))
        pytest.skip(reason)

    record.skip = skip
    return record


def csv_bytes(*rows: str) -> bytes:
    return ("\n".join((HEADER, *rows)) + "\n").encode("utf-8")


def parse(data: bytes, schema=None):
    return parse_stream(schema or default_schema(), io.BytesIO(data))


@pytest.fixture
def small_frame():
    return Frame.from_dict({
        "age_group": ("text", ["0 to 17", "18 to 29", "0 to 17", "70 or Older", "0 to 17",
                               "50 to 69", "18 to 29", "30 to 49", "50 to 69", "70 or Older"]),
        "diagnosis": ("text", ["LIVEBORN", "MOOD DISORDERS", "MOOD DISORDERS", "OSTEOARTHRITIS", "ASTHMA",
                               "OSTEOARTHRITIS", "MOOD DISORDERS", "ASTHMA", "OSTEOARTHRITIS", None]),
        "year": ("year", [2009, 2009, 2014, 2014, 2014, 2009, 2014, 2014, 2014, 2009]),
        "cost": ("money", [350000, 900000, 1100000, 2300000, 450000, 1800000, None, 520000, 3100000, 700000]),
    }, roles={"year": "year", "cost": "cost", "diagnosis": "diagnosis", "age_group": "age_group"})


LABELS = ["ASTHMA", "LIVEBORN", "MOOD DISORDERS", "OSTEOARTHRITIS", "PNEUMONIA", "SEPSIS"]
COUNTIES = ["Bronx", "Erie", "Kings", "Queens", "Westchester"]


def random_frame(seed: int, max_rows: int = 1000):
    """Random mixed-null frame plus the same data as plain record dicts.

    The records are built from the generated Python lists, not read back
    from the frame, so oracles never see engine code.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, max_rows + 1))
    null_rate = float(rng.choice([0.0, 0.05, 0.3]))
    cardinality = int(rng.integers(1, len(LABELS) + 1))

    def maybe_null(values):
        mask = rng.random(n) < null_rate
        return [None if m else v for v, m in zip(values, mask.tolist())]

    label = maybe_null([LABELS[i] for i in rng.integers(0, cardinality, n).tolist()])
    county = maybe_null([COUNTIES[i] for i in rng.integers(0, len(COUNTIES), n).tolist()])
    year = maybe_null(rng.integers(2009, 2015, n).tolist())
    cost = maybe_null(np.rint(rng.lognormal(13.5, 1.2, n)).astype(np.int64).tolist())
    qty = maybe_null(rng.integers(-50, 50, n).tolist())
    frame = Frame.from_dict({
        "label": ("text", label),
        "county": ("text", county),
        "year": ("year", year),
        "cost": ("money", cost),
        "qty": ("integer", qty),
    }, roles={"year": "year", "cost": "cost", "county": "county", "diagnosis": "label"})
    records = [dict(label=a, county=b, year=c, cost=d, qty=e)
               for a, b, c, d, e in zip(label, county, year, cost, qty)]
    return frame, records
