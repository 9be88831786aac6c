"""Command-line frontend: slope checks, cone diagnostics, and census runs.

Exit codes: `check` returns 0 (NotExcluded), 10 (Excluded) or 2 (input
error); `cone` returns 0 or 2; `census` returns 0, 2 (fatal: unreadable
file or bad header) or 3 (completed but some lines were invalid).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .knotdata import (
    ExplicitModelData,
    KnotRecord,
    SchemaError,
    _parse_alexander,
    _parse_hfk_top,
    build_model,
    load_knot_table,
    validate_record,
)
from .cone import Slope, surgery_d, surgery_homology, build_surgery_cone
from .obstruct import (
    VERDICT_NONE,
    check_negative_sf,
    check_positive_sf,
    sf_window,
)

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_PARTIAL = 3
EXIT_EXCLUDED = 10

FILTERS = ("alternating-slice", "nonalternating-slice", "all")


class CliError(Exception):
    pass


def _print_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _parse_slope_fraction(text: str) -> Fraction:
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"unparseable slope {text!r}") from None
    if frac == 0:
        raise CliError("zero slope rejected: surgery slope must be nonzero")
    return frac


def _record_from_args(args) -> KnotRecord:
    if args.name is not None:
        if args.input is None:
            raise CliError("--name requires --input TABLE")
        return _lookup_record(args.input, args.format, args.name)
    if args.alexander is None or args.genus is None or args.slice_genus is None:
        raise CliError(
            "inline knots need --alexander, --genus and --slice-genus "
            "(or use --name with --input)"
        )
    try:
        return KnotRecord(
            name=args.label,
            alexander=_parse_alexander(args.alexander),
            genus=args.genus,
            slice_genus=args.slice_genus,
            is_slice=args.slice,
            is_alternating=args.alternating,
            hfk_top=_parse_hfk_top(args.hfk_top) if args.hfk_top else None,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _lookup_record(path: str, fmt: str, name: str) -> KnotRecord:
    try:
        stream = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    with stream:
        try:
            for _, item in load_knot_table(stream, fmt=fmt):
                if isinstance(item, KnotRecord) and item.name == name:
                    return item
        except SchemaError as exc:
            raise CliError(str(exc)) from None
    raise CliError(f"unknown knot name {name!r} in {path}")


def _validated_from_args(args):
    result = validate_record(_record_from_args(args))
    if isinstance(result, list):
        raise CliError("invalid knot record: " + "; ".join(result))
    return result


def _add_knot_spec_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--name", help="look the knot up by name in --input")
    sub.add_argument("--input", help="knot table to search with --name")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="table format for --input (default csv)")
    sub.add_argument("--label", default="inline",
                     help="name for an inline record (default 'inline')")
    sub.add_argument("--alexander", help='coefficients "a0;a1;...;an"')
    sub.add_argument("--genus", type=int, help="Seifert genus")
    sub.add_argument("--slice-genus", type=int, dest="slice_genus")
    sub.add_argument("--slice", action="store_true", help="knot is slice")
    sub.add_argument("--alternating", action="store_true")
    sub.add_argument("--hfk-top", dest="hfk_top",
                     help='top-grading ranks "even:odd"')


def cmd_check(args) -> int:
    vk = _validated_from_args(args)
    r = _parse_slope_fraction(args.slope)
    # negative slopes go through the mirror, whose record-level data is
    # identical, so the check runs on |r| under the same orientation label
    if args.orientation == "pos":
        verdict = check_positive_sf(vk, abs(r))
    else:
        verdict = check_negative_sf(vk, abs(r))
    _print_json(verdict.as_json())
    return EXIT_EXCLUDED if verdict.excluded else EXIT_OK


def _load_model_data(text: str) -> ExplicitModelData:
    if not text.lstrip().startswith("{"):
        try:
            with open(text, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read model data: {exc}") from None
    try:
        return ExplicitModelData.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"bad model data: {exc}") from None


def cmd_cone(args) -> int:
    vk = _validated_from_args(args)
    try:
        slope = Slope.parse(args.slope)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if slope.p <= 0:
        raise CliError("cone diagnostics need a positive slope p/q with p > 0")
    try:
        if args.model is not None:
            model = build_model(vk, tier="explicit",
                                explicit_data=_load_model_data(args.model))
        else:
            model = build_model(vk)
    except ValueError as exc:
        raise CliError(str(exc)) from None

    if args.spinc is not None:
        if not 0 <= args.spinc < slope.p:
            raise CliError(f"spin-c index must lie in [0, {slope.p})")
        levels = [args.spinc]
    else:
        levels = list(range(slope.p))

    spinc_out = {}
    for i in levels:
        summary = surgery_homology(model, slope, i)
        d = surgery_d(model, slope, i)
        entry = summary.as_json()
        entry["d_invariant"] = f"{d.numerator}/{d.denominator}"
        spinc_out[str(i)] = entry
    out = {
        "knot": model.name,
        "slope": str(slope),
        "tier": model.tier.value,
        "spinc": spinc_out,
        "stability": "verified: window +2 / depth +4 rerun matched",
    }
    if args.spinc is not None:
        out["cone"] = build_surgery_cone(model, slope, args.spinc).to_json()
    _print_json(out)
    return EXIT_OK


def _survival(cell) -> str:
    if cell.exclusion == "all":
        return "none"
    if cell.exclusion == "interval":
        b = cell.bound
        return f"|r| >= {b.numerator}/{b.denominator}"
    return "all slopes"


def _filter_admits(choice: str, record: KnotRecord) -> bool:
    if choice == "alternating-slice":
        return record.is_slice and record.is_alternating
    if choice == "nonalternating-slice":
        return record.is_slice and not record.is_alternating
    return True


def _census_class(record: KnotRecord) -> str:
    if record.is_slice:
        return "alternating_slice" if record.is_alternating else "nonalternating_slice"
    return "nonslice"


def cmd_census(args) -> int:
    if args.input is None:
        table = resources.files("floerslopes").joinpath("fixtures/knots.csv")
        stream = table.open("r", encoding="utf-8")
    else:
        try:
            stream = open(args.input, "r", encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read {args.input}: {exc}") from None

    errors: list[dict] = []
    excluded: list[tuple[str, int, dict]] = []
    survivors: list[tuple[str, int, dict]] = []
    classes = {
        key: {"total": 0, "excluded": 0, "not_excluded": 0}
        for key in ("alternating_slice", "nonalternating_slice", "nonslice")
    }
    total = 0
    with stream:
        rows = load_knot_table(stream, fmt=args.format)
        while True:
            try:
                lineno, item = next(rows)
            except StopIteration:
                break
            except SchemaError as exc:
                raise CliError(str(exc)) from None
            if isinstance(item, str):
                errors.append({"line": lineno, "error": item})
                continue
            if not _filter_admits(args.filter, item):
                continue
            validated = validate_record(item)
            if isinstance(validated, list):
                errors.append({"line": lineno, "error": "; ".join(validated)})
                continue
            total += 1
            bucket = classes[_census_class(item)]
            bucket["total"] += 1
            report = sf_window(validated)
            if report.verdict == VERDICT_NONE:
                bucket["excluded"] += 1
                theorems = sorted({
                    reason.theorem
                    for cell in report.cells.values()
                    for reason in cell.reasons
                })
                excluded.append((item.name, lineno, {
                    "name": item.name,
                    "theorems": theorems,
                }))
            else:
                bucket["not_excluded"] += 1
                surviving = {}
                for (orientation, sign), cell in report.cells.items():
                    surviving.setdefault(orientation, {})[sign] = _survival(cell)
                survivors.append((item.name, lineno, {
                    "name": item.name,
                    "verdict": report.verdict,
                    "surviving": surviving,
                }))

    report_json = {
        "total": total,
        "filter": args.filter,
        "classes": classes,
        "excluded": [entry for _, _, entry in sorted(excluded, key=lambda t: (t[0], t[1]))],
        "not_excluded": [entry for _, _, entry in sorted(survivors, key=lambda t: (t[0], t[1]))],
        "errors": errors,
    }
    _print_json(report_json)
    return EXIT_PARTIAL if errors else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floerslopes",
        description="Seifert fibered surgery slope obstructions from "
                    "Heegaard Floer surgery invariants",
        epilog="FSL_DEPTH_MARGIN (integer >= 0) widens every cone "
               "truncation window and U-depth.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="test one slope/orientation cell")
    _add_knot_spec_args(p_check)
    p_check.add_argument("--slope", required=True, help='surgery slope "p/q", nonzero')
    p_check.add_argument("--orientation", choices=("pos", "neg"), required=True,
                         help="Seifert orientation to test against")
    p_check.set_defaults(func=cmd_check)

    p_cone = sub.add_parser("cone", help="mapping-cone homology diagnostics")
    _add_knot_spec_args(p_cone)
    p_cone.add_argument("--slope", required=True, help='surgery slope "p/q", p > 0')
    p_cone.add_argument("--spinc", type=int, default=None,
                        help="single spin-c index (default: all of 0..p-1)")
    p_cone.add_argument("--model", default=None,
                        help="explicit V/H + reduced data, inline JSON or a path")
    p_cone.set_defaults(func=cmd_cone)

    p_census = sub.add_parser("census", help="batch-run sf_window over a table")
    p_census.add_argument("--input", default=None,
                          help="knot table path (default: bundled fixture)")
    p_census.add_argument("--format", choices=("csv", "json"), default="csv")
    p_census.add_argument("--filter", choices=FILTERS, default="all")
    p_census.set_defaults(func=cmd_census)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"floerslopes: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # engine-level failures still exit cleanly
        print(f"floerslopes: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
