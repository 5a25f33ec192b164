"""Regenerate src/boat/synth/reference_profile.json.

The profile is hand-shaped: an age 0-17 diagnosis mix led by LIVEBORN, a
mood-disorder panel that grows ~40% between 2009 and 2014 (with two
Westchester facilities at +42% and +60%), and a hip-replacement cohort built
from a tight bulk stratum plus a heavy tail so that roughly 88% of 2014
costs fall under $30,000.

    python tools/make_reference_profile.py
"""

import json
import math
from pathlib import Path

YEARS = list(range(2009, 2015))
OUT = Path(__file__).resolve().parents[1] / "src" / "boat" / "synth" / "reference_profile.json"

FACILITIES = [
    ("Kings", "Kings General Hospital", 1.30),
    ("Kings", "Brooklyn Community Medical Center", 1.10),
    ("Queens", "Queens General Hospital", 1.15),
    ("Queens", "Flushing Community Hospital", 0.85),
    ("New York", "Manhattan University Hospital", 1.25),
    ("New York", "Midtown Medical Center", 0.95),
    ("Bronx", "Bronx General Hospital", 1.05),
    ("Bronx", "Fordham Community Hospital", 0.80),
    ("Suffolk", "Suffolk University Hospital", 0.90),
    ("Suffolk", "Islip Community Hospital", 0.60),
    ("Westchester", "Presbyterian Westchester Hospital", 0.95),
    ("Westchester", "Westchester Regional Medical Center", 0.85),
    ("Nassau", "Nassau University Hospital", 0.90),
    ("Nassau", "Mineola Community Hospital", 0.70),
    ("Erie", "Buffalo General Hospital", 0.75),
    ("Erie", "Erie Community Medical Center", 0.45),
    ("Monroe", "Rochester University Hospital", 0.70),
    ("Monroe", "Monroe Community Hospital", 0.40),
]
WEIGHT_TOTAL = sum(w for _, _, w in FACILITIES)

# diagnosis, procedure, statewide cases 2009, cases 2014, median cost ($), log-sigma
PEDIATRIC = [
    ("LIVEBORN", "PROPHYLACTIC VAC/INOCUL", 900, 1000, 3500, 0.8),
    ("SHORT GESTATION; LOW BIRTH WEIGHT; AND FETAL GROWTH RETARDATION", "RESP INTUB/MECH VENTIL", 60, 66, 25000, 1.0),
    ("RESPIRATORY DISTRESS SYNDROME", "RESP INTUB/MECH VENTIL", 40, 44, 20000, 0.9),
    ("ASTHMA", "NO PROC", 130, 115, 5000, 0.6),
    ("PNEUMONIA (EXCEPT THAT CAUSED BY TUBERCULOSIS OR SEXUALLY TRANSMITTED DISEASE)", "NO PROC", 75, 70, 7000, 0.7),
    ("EPILEPSY; CONVULSIONS", "NO PROC", 50, 55, 9000, 0.7),
    ("ACUTE BRONCHITIS", "NO PROC", 95, 90, 4500, 0.6),
    ("APPENDICITIS AND OTHER APPENDICEAL CONDITIONS", "APPENDECTOMY", 55, 52, 8000, 0.5),
    ("OTHER PERINATAL CONDITIONS", "NO PROC", 45, 50, 10000, 0.8),
    ("CARDIAC AND CIRCULATORY CONGENITAL ANOMALIES", "OT OR HEART PROCEDURE", 15, 17, 40000, 1.0),
    ("SICKLE CELL ANEMIA", "NO PROC", 35, 38, 9000, 0.6),
    ("DIABETES MELLITUS WITH COMPLICATIONS", "NO PROC", 30, 33, 8000, 0.5),
]
MOOD = ("MOOD DISORDERS", "PSYCHO/PSYCHI EVAL/THER")
# per-facility growth of pediatric mood-disorder cases, 2009 -> 2014
MOOD_GROWTH = {
    "Presbyterian Westchester Hospital": 0.42,
    "Westchester Regional Medical Center": 0.60,
}
HIP = ("OSTEOARTHRITIS", "HIP REPLACEMENT, TOTAL AND PARTIAL")
HIP_TAIL = ("FRACTURE OF NECK OF FEMUR (HIP)", "HIP REPLACEMENT, TOTAL AND PARTIAL")


def ramp(first, last):
    return [round(first + (last - first) * i / (len(YEARS) - 1)) for i in range(len(YEARS))]


def log_mean(median_dollars):
    return round(math.log(median_dollars * 100), 6)


def stratum(county, facility, age, diagnosis, procedure, cases, median, sigma):
    return {"county": county, "facility": facility, "age_group": age, "diagnosis": diagnosis,
            "procedure": procedure, "cases": cases, "cost_log_mean": log_mean(median),
            "cost_log_sigma": sigma}


def build():
    strata = []
    for i, (county, facility, w) in enumerate(FACILITIES):
        share = w / WEIGHT_TOTAL
        for diagnosis, procedure, c0, c1, median, sigma in PEDIATRIC:
            strata.append(stratum(county, facility, "0 to 17", diagnosis, procedure,
                                  ramp(c0 * share, c1 * share), median, sigma))
        base = 12 * w
        growth = MOOD_GROWTH.get(facility, 0.30 + 0.03 * (i % 6))
        strata.append(stratum(county, facility, "0 to 17", *MOOD, ramp(base, base * (1 + growth)),
                              9000 + 250 * (i % 5), 0.6))
        strata.append(stratum(county, facility, "18 to 29", *MOOD, ramp(8 * w, 9 * w), 8500, 0.6))
        for age, scale in (("50 to 69", 55), ("70 or Older", 45)):
            strata.append(stratum(county, facility, age, *HIP, ramp(scale * w * 0.80, scale * w),
                                  18000, 0.30))
            strata.append(stratum(county, facility, age, *HIP_TAIL,
                                  ramp(scale * w * 0.09, scale * w * 0.11), 45000, 0.60))
    return {"seed": 20170924, "dirty_row_rate": 0.01, "years": YEARS, "strata": strata}


if __name__ == "__main__":
    OUT.write_text(json.dumps(build(), indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")
