import json
import subprocess
import sys

import pytest

from boat.cli import main
from boat.ingest import is_snapshot, read_snapshot

from .conftest import HEADER, csv_bytes

ROWS = (
    "2014,Kings,Kings General,70 or Older,OSTEOARTHRITIS,\"HIP REPLACEMENT, TOTAL AND PARTIAL\",\"$18,000.00\"",
    "2014,Kings,Kings General,50 to 69,OSTEOARTHRITIS,\"HIP REPLACEMENT, TOTAL AND PARTIAL\",42000",
    "2009,Erie,Erie Central,0 to 17,LIVEBORN,NO PROC,3500.50",
    "2014,Erie,Erie Central,0 to 17,LIVEBORN,NO PROC,N/A",
)


@pytest.fixture
def csv_file(tmp_path):
    path = tmp_path / "in.csv"
    path.write_bytes(csv_bytes(*ROWS))
    return path


def test_ingest_writes_snapshot_and_report(csv_file, tmp_path):
    out = tmp_path / "snap"
    assert main(["ingest", "--input", str(csv_file), "--out", str(out)]) == 0
    assert is_snapshot(out) and read_snapshot(out).row_count == 3
    rep = json.loads((out / "parse_report.json").read_text())
    assert rep["rows_read"] == 4 and rep["rows_quarantined"] == 1


def test_snapshot_input_gives_same_documents(csv_file, tmp_path):
    snap = tmp_path / "snap"
    main(["ingest", "--input", str(csv_file), "--out", str(snap)])
    args = ["cap", "--threshold", "30000", "--hist-width", "10000", "--hist-bins", "5"]
    assert main([*args, "--input", str(csv_file), "--out", str(tmp_path / "a")]) == 0
    assert main([*args, "--input", str(snap), "--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "cap.json").read_bytes() == (tmp_path / "b" / "cap.json").read_bytes()
    doc = json.loads((tmp_path / "a" / "cap.json").read_text())
    assert doc["metadata"]["n"] == 3 and doc["series"][0]["y"][:2] == [1, 1]


def test_reruns_are_byte_identical_and_timestamp_is_sidecar(csv_file, tmp_path):
    args = ["top-costs", "--years", "2009,2014", "--input", str(csv_file), "--csv"]
    main([*args, "--out", str(tmp_path / "a")])
    main([*args, "--out", str(tmp_path / "b")])
    for name in ("top_costs.json", "top_costs.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert "generated_at" in (tmp_path / "a" / "top_costs.json.meta").read_text()


def test_empty_cohort_exit_2_names_predicate(csv_file, tmp_path, capsys):
    code = main(["cap", "--threshold", "30000", "--filter", "diagnosis=SEPSIS",
                 "--input", str(csv_file), "--out", str(tmp_path / "o")])
    assert code == 2 and "diagnosis=SEPSIS" in capsys.readouterr().err
    assert not (tmp_path / "o" / "cap.json").exists()


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["cap", "--threshold", "30000", "--bogus"],
    ["cap", "--threshold", "abc"],
    ["trend", "--years", "2014:2009"],
    ["trend", "--years", "2009:2014", "--filter", "nosuchfield=1"],
    ["top-costs", "--years", "2009,2014", "--filter", "year=notayear"],
])
def test_validation_errors_exit_1(argv, csv_file, tmp_path):
    full = argv if argv == ["frobnicate"] else [*argv, "--input", str(csv_file), "--out", str(tmp_path / "o")]
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(full))
    assert exc.value.code == 1


def test_header_mismatch_exit_2(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(HEADER.replace("Total Costs", "Charges") + "\n")
    assert main(["ingest", "--input", str(path), "--out", str(tmp_path / "o")]) == 2


def test_schema_env_override(tmp_path, monkeypatch):
    schema = tmp_path / "s.ini"
    schema.write_text("\n".join([
        "[Yr]", "type = year", "role = year",
        "[Cty]", "type = text", "role = county",
        "[Fac]", "type = text", "role = facility",
        "[Age]", "type = text", "role = age_group",
        "[Dx]", "type = text", "role = diagnosis",
        "[Px]", "type = text", "role = procedure",
        "[Cost]", "type = money", "role = cost", "",
    ]))
    data = tmp_path / "d.csv"
    data.write_text("Yr,Cty,Fac,Age,Dx,Px,Cost\n2014,Kings,K,0 to 17,LIVEBORN,NONE,100\n")
    monkeypatch.setenv("BOAT_SCHEMA", str(schema))
    assert main(["describe", "--input", str(data), "--out", str(tmp_path / "o")]) == 0
    doc = json.loads((tmp_path / "o" / "describe.json").read_text())
    assert doc["n"] == 1 and doc["mean"] == 100.0


def test_describe_and_trend(csv_file, tmp_path):
    out = tmp_path / "o"
    assert main(["describe", "--filter", "year=2014", "--input", str(csv_file), "--out", str(out)]) == 0
    doc = json.loads((out / "describe.json").read_text())
    assert doc["n"] == 2 and doc["sum"] == 60000.0 and doc["median"] == 18000.0
    assert main(["trend", "--years", "2009:2014", "--metric", "sum", "--input", str(csv_file),
                 "--out", str(out)]) == 0
    trend = json.loads((out / "trend.json").read_text())
    assert [s["name"] for s in trend["series"]] == ["Kings", "Erie"]
    assert trend["series"][0]["y"] == [0.0, 0.0, 0.0, 0.0, 0.0, 60000.0]


def test_synth_command_writes_csv_and_ledger(tmp_path):
    assert main(["synth", "--seed", "3", "--out", str(tmp_path)]) == 0
    ledger = json.loads((tmp_path / "ledger.json").read_text())
    assert ledger["rows_emitted"] == sum(1 for _ in open(tmp_path / "synth.csv")) - 1


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "boat.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "top-costs" in proc.stdout
