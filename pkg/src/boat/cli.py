"""``boat`` command line.

Exit codes: 0 success, 1 invalid invocation (bad flags, unknown fields,
bad schema or profile), 2 data errors (header mismatch, empty cohort,
empty result). Outputs go under ``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from boat import report
from boat.analytics import cap_analysis, cost_comparison, trend_by_group
from boat.engine import BETWEEN, EQUALS, MONEY, ONE_OF, TEXT, Clause, Frame, describe, filter
from boat.errors import BoatError, DataError, ValidationError
from boat.ingest import is_snapshot, load_schema_file, parse_file, parse_money, read_snapshot, write_snapshot
from boat.synth import generate_file, load_profile, reference_profile

logger = logging.getLogger("boat")

DEFAULT_HIST_WIDTH = "2500"
DEFAULT_HIST_BINS = 60
PARSE_REPORT = "parse_report.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _split_filter(text: str) -> tuple[str, str, str]:
    """``field=value`` | ``field in a|b`` | ``field between a,b`` -> (field, op, raw)."""
    candidates = []
    for token, op in (("=", EQUALS), (" in ", ONE_OF), (" between ", BETWEEN)):
        pos = text.find(token)
        if pos > 0:
            candidates.append((pos, token, op))
    if not candidates:
        raise ValidationError(f"cannot parse filter {text!r}; use field=value, "
                              "'field in a|b' or 'field between a,b'")
    pos, token, op = min(candidates)
    return text[:pos].strip(), op, text[pos + len(token):].strip()


def _convert(frame: Frame, field: str, raw: str):
    col = frame.column(field)
    if col.type == TEXT:
        return raw
    if col.type == MONEY:
        return parse_money(raw)
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"filter value {raw!r} is not an integer for field {field!r}") from None


def build_predicate(frame: Frame, filters: list[str]) -> list[Clause]:
    clauses = []
    for text in filters or []:
        field, op, raw = _split_filter(text)
        if op == EQUALS:
            value = _convert(frame, field, raw)
        elif op == ONE_OF:
            value = tuple(_convert(frame, field, v.strip()) for v in raw.split("|"))
        else:
            parts = raw.split(",")
            if len(parts) != 2:
                raise ValidationError(f"'between' needs two comma-separated bounds: {text!r}")
            value = tuple(_convert(frame, field, v.strip()) for v in parts)
        clauses.append(Clause(field, op, value))
    return clauses


def _year_pair(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d{4})\s*,\s*(\d{4})\s*", text)
    if not m:
        raise ValidationError(f"--years expects y0,y1, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _year_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d{4})\s*:\s*(\d{4})\s*", text)
    if not m or int(m.group(1)) >= int(m.group(2)):
        raise ValidationError(f"--years expects y0:y1 with y0 < y1, got {text!r}")
    return list(range(int(m.group(1)), int(m.group(2)) + 1))


def _dollars_flag(text: str, flag: str) -> int:
    try:
        return parse_money(text)
    except ValidationError as exc:
        raise ValidationError(f"{flag}: {exc}") from None


def load_input(args) -> Frame:
    src = Path(args.input)
    if src.is_dir() and is_snapshot(src):
        logger.info("reading snapshot %s", src)
        return read_snapshot(src)
    if not src.is_file():
        raise ValidationError(f"input not found: {src}")
    schema = load_schema_file(args.schema)
    frame, parse_report = parse_file(schema, src)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / PARSE_REPORT).write_text(json.dumps(parse_report.to_dict(), indent=2) + "\n", encoding="utf-8")
    logger.info("parsed %d rows (%d quarantined)", parse_report.rows_ok, parse_report.rows_quarantined)
    return frame


def _write(doc, args, name: str) -> None:
    path = report.write_document(doc, Path(args.out) / name, csv_copy=args.csv)
    logger.info("wrote %s", path)


def cmd_ingest(args) -> None:
    frame = load_input(args)
    write_snapshot(frame, args.out)


def cmd_describe(args) -> None:
    frame = load_input(args)
    predicate = build_predicate(frame, args.filter)
    col = filter(frame, predicate).column(args.field)
    stats = describe(col, args.field)
    money = col.type == MONEY
    conv = report.dollars if money else (lambda v: v)
    doc = {
        "field": args.field,
        "filters": [str(c) for c in predicate],
        "n": stats.n,
        "sum": conv(stats.sum) if stats.sum is not None else None,
        "mean": conv(stats.mean_rounded) if money else (float(stats.mean) if stats.mean is not None else None),
        "std_sample": conv(stats.std_rounded) if money else stats.std_sample,
        "min": conv(stats.min),
        "max": conv(stats.max),
        "median": conv(stats.median),
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "describe.json").write_text(report.dumps_json(doc), encoding="utf-8")


def cmd_top_costs(args) -> None:
    frame = load_input(args)
    table = cost_comparison(frame, build_predicate(frame, args.filter), args.group, _year_pair(args.years),
                            top=args.top, skip_top=args.skip_top)
    _write(report.emit_bar(table), args, "top_costs.json")


def cmd_trend(args) -> None:
    frame = load_input(args)
    predicate = build_predicate(frame, args.filter)
    series = trend_by_group(frame, predicate, args.group, args.metric, _year_range(args.years), args.top)
    doc = report.emit_lines(series, group_field=args.group, filters=[str(c) for c in predicate],
                            source_rows=frame.row_count)
    _write(doc, args, "trend.json")


def cmd_cap(args) -> None:
    frame = load_input(args)
    cap = cap_analysis(
        frame,
        build_predicate(frame, args.filter),
        threshold=_dollars_flag(args.threshold, "--threshold"),
        hist_lo=_dollars_flag(args.hist_lo, "--hist-lo"),
        hist_width=_dollars_flag(args.hist_width, "--hist-width"),
        hist_k=args.hist_bins,
    )
    _write(report.emit_histogram(cap), args, "cap.json")


def cmd_synth(args) -> None:
    profile = load_profile(args.profile) if args.profile else reference_profile()
    if args.seed is not None:
        profile = profile.with_seed(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ledger = generate_file(profile, out / "synth.csv")
    (out / "ledger.json").write_text(json.dumps(ledger.to_dict(profile), indent=1) + "\n", encoding="utf-8")
    logger.info("generated %d rows (%d corrupted)", ledger.rows_emitted, ledger.corrupted)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boat", description="Analytics over hospital discharge extracts.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def data_command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--input", required=True, help="CSV file or snapshot directory")
        p.add_argument("--schema", help="schema file (default: $BOAT_SCHEMA or bundled)")
        p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(func=func)
        return p

    data_command("ingest", cmd_ingest, "parse a CSV into a snapshot directory")

    def analysis(name, func, help):
        p = data_command(name, func, help)
        p.add_argument("--filter", action="append", default=[],
                       help="field=value, 'field in a|b' or 'field between a,b' (repeatable)")
        p.add_argument("--csv", action="store_true", help="also write a flat series,x,y CSV")
        return p

    p = analysis("describe", cmd_describe, "descriptive statistics for one field")
    p.add_argument("--field", default="cost")

    p = analysis("top-costs", cmd_top_costs, "labels ranked by total cost in two years")
    p.add_argument("--group", default="diagnosis")
    p.add_argument("--years", required=True, help="y0,y1")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--skip-top", type=int, default=0)

    p = analysis("trend", cmd_trend, "per-group yearly trend with percent change")
    p.add_argument("--group", default="county")
    p.add_argument("--metric", choices=("count", "sum", "mean"), default="count")
    p.add_argument("--years", required=True, help="y0:y1 (inclusive)")
    p.add_argument("--top", type=int, default=5)

    p = analysis("cap", cmd_cap, "cost distribution against a cap")
    p.add_argument("--threshold", required=True, help="cap in dollars")
    p.add_argument("--hist-lo", default="0", help="first bin edge in dollars")
    p.add_argument("--hist-width", default=DEFAULT_HIST_WIDTH, help="bin width in dollars")
    p.add_argument("--hist-bins", type=int, default=DEFAULT_HIST_BINS)

    p = sub.add_parser("synth", help="generate a synthetic CSV and its ledger")
    p.add_argument("--profile", help="profile JSON (default: bundled reference profile)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except DataError as exc:
        print(f"boat: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, BoatError) as exc:
        print(f"boat: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"boat: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
