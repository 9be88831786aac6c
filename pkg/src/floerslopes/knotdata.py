"""Knot records: parsing, validation, and the two tiers of concordance models.

A record is a flat row of classical inputs (Alexander coefficients, genus,
slice genus, flags, optionally the top knot Floer ranks).  Validation
promotes it to a ValidatedKnot with a normalized polynomial and torsion
profile.  Building a model attaches the local surgery data: either derived
from the polynomial (L-space tier) or supplied explicitly.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .alexander import (
    AlexanderError,
    AlexanderPolynomial,
    TorsionProfile,
    hfk_consistency,
    normalize,
    torsion_profile,
)
from .vh import (
    LSpaceModelError,
    VHFunction,
    VHSequence,
    VHWindowError,
    lspace_vh,
    validate_vh,
)
from .graded import ReducedSummand

__all__ = [
    "SchemaError",
    "ParseFieldError",
    "KnotRecord",
    "ValidatedKnot",
    "Tier",
    "ExplicitModelData",
    "KnotModel",
    "parse_knot_record",
    "serialize_knot_record",
    "validate_record",
    "build_model",
    "load_knot_table",
]

CSV_COLUMNS = (
    "name",
    "alexander",
    "genus",
    "slice_genus",
    "is_slice",
    "is_alternating",
    "hfk_top",
)


class SchemaError(ValueError):
    """Header or row shape does not match the table schema."""


class ParseFieldError(ValueError):
    """A single field failed to parse; carries the column name."""

    def __init__(self, column: str, message: str):
        self.column = column
        super().__init__(f"{column}: {message}")


@dataclass(frozen=True)
class KnotRecord:
    """One row of classical knot data, as parsed (not yet validated)."""

    name: str
    alexander: tuple[int, ...]
    genus: int
    slice_genus: int
    is_slice: bool
    is_alternating: bool
    hfk_top: Optional[tuple[int, int]] = None  # (even rank, odd rank)


def _parse_bool(column: str, text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise ParseFieldError(column, f"expected a boolean, got {text!r}")


def _parse_int(column: str, text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ParseFieldError(column, f"expected an integer, got {text!r}") from None


def _parse_alexander(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.strip().split(";")]
    if parts == [""]:
        raise ParseFieldError("alexander", "coefficient list is empty")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ParseFieldError(
            "alexander", f"expected ';'-separated integers, got {text!r}"
        ) from None


def _parse_hfk_top(text: str) -> Optional[tuple[int, int]]:
    t = text.strip()
    if not t:
        return None
    pieces = t.split(":")
    if len(pieces) != 2:
        raise ParseFieldError("hfk_top", f"expected 'even:odd', got {text!r}")
    try:
        even, odd = int(pieces[0]), int(pieces[1])
    except ValueError:
        raise ParseFieldError("hfk_top", f"expected 'even:odd', got {text!r}") from None
    return (even, odd)


def parse_knot_record(line: Union[str, dict, list, tuple], fmt: str = "csv") -> KnotRecord:
    """Parse one table line into a KnotRecord.

    Args:
        line: a raw text line (csv or a json object literal); pre-split
            field lists and decoded json objects are also accepted.
        fmt: "csv" or "json".
    """
    if isinstance(line, str):
        if fmt == "csv":
            rows = list(csv.reader([line]))
            if not rows:
                raise SchemaError("empty csv line")
            return _record_from_fields(rows[0])
        if fmt == "json":
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid json: {exc.msg}") from None
            return _record_from_object(obj)
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "csv":
        if not isinstance(line, (list, tuple)):
            raise SchemaError("csv row must be a sequence of fields")
        return _record_from_fields(line)
    if fmt == "json":
        if not isinstance(line, dict):
            raise SchemaError("json row must be an object")
        return _record_from_object(line)
    raise ValueError(f"unknown format {fmt!r}")


def _record_from_fields(row: Union[list, tuple]) -> KnotRecord:
    if len(row) != len(CSV_COLUMNS):
        raise SchemaError(
            f"expected {len(CSV_COLUMNS)} fields, got {len(row)}"
        )
    d = dict(zip(CSV_COLUMNS, (str(x) for x in row)))
    name = d["name"].strip()
    if not name:
        raise ParseFieldError("name", "must be nonempty")
    return KnotRecord(
        name=name,
        alexander=_parse_alexander(d["alexander"]),
        genus=_parse_int("genus", d["genus"]),
        slice_genus=_parse_int("slice_genus", d["slice_genus"]),
        is_slice=_parse_bool("is_slice", d["is_slice"]),
        is_alternating=_parse_bool("is_alternating", d["is_alternating"]),
        hfk_top=_parse_hfk_top(d["hfk_top"]),
    )


def _record_from_object(row: dict) -> KnotRecord:
    missing = [c for c in CSV_COLUMNS[:-1] if c not in row]
    if missing:
        raise SchemaError(f"missing keys: {', '.join(missing)}")
    name = str(row["name"]).strip()
    if not name:
        raise ParseFieldError("name", "must be nonempty")
    alex = row["alexander"]
    if isinstance(alex, str):
        alexander = _parse_alexander(alex)
    else:
        try:
            alexander = tuple(int(x) for x in alex)
        except (TypeError, ValueError):
            raise ParseFieldError(
                "alexander", f"expected a list of integers, got {alex!r}"
            ) from None
        if not alexander:
            raise ParseFieldError("alexander", "coefficient list is empty")
    hfk = row.get("hfk_top")
    if hfk is None or hfk == "":
        hfk_top = None
    elif isinstance(hfk, str):
        hfk_top = _parse_hfk_top(hfk)
    else:
        try:
            even, odd = hfk
            hfk_top = (int(even), int(odd))
        except (TypeError, ValueError):
            raise ParseFieldError(
                "hfk_top", f"expected [even, odd], got {hfk!r}"
            ) from None
    genus = row["genus"]
    slice_genus = row["slice_genus"]
    if not isinstance(genus, int) or isinstance(genus, bool):
        raise ParseFieldError("genus", f"expected an integer, got {genus!r}")
    if not isinstance(slice_genus, int) or isinstance(slice_genus, bool):
        raise ParseFieldError(
            "slice_genus", f"expected an integer, got {slice_genus!r}"
        )
    for flag in ("is_slice", "is_alternating"):
        if not isinstance(row[flag], bool):
            raise ParseFieldError(flag, f"expected a boolean, got {row[flag]!r}")
    return KnotRecord(
        name=name,
        alexander=alexander,
        genus=genus,
        slice_genus=slice_genus,
        is_slice=row["is_slice"],
        is_alternating=row["is_alternating"],
        hfk_top=hfk_top,
    )


def serialize_knot_record(record: KnotRecord, fmt: str = "csv") -> Union[str, dict]:
    """Inverse of parse_knot_record; csv gives one unterminated line."""
    if fmt == "csv":
        hfk = "" if record.hfk_top is None else f"{record.hfk_top[0]}:{record.hfk_top[1]}"
        fields = [
            record.name,
            ";".join(str(c) for c in record.alexander),
            str(record.genus),
            str(record.slice_genus),
            "true" if record.is_slice else "false",
            "true" if record.is_alternating else "false",
            hfk,
        ]
        buf = io.StringIO()
        csv.writer(buf, lineterminator="").writerow(fields)
        return buf.getvalue()
    if fmt == "json":
        out: dict = {
            "name": record.name,
            "alexander": list(record.alexander),
            "genus": record.genus,
            "slice_genus": record.slice_genus,
            "is_slice": record.is_slice,
            "is_alternating": record.is_alternating,
        }
        if record.hfk_top is not None:
            out["hfk_top"] = list(record.hfk_top)
        return out
    raise ValueError(f"unknown format {fmt!r}")


@dataclass(frozen=True)
class ValidatedKnot:
    """A record that passed validation, with derived invariants attached."""

    record: KnotRecord
    polynomial: AlexanderPolynomial
    torsion: TorsionProfile

    @property
    def name(self) -> str:
        return self.record.name

    @property
    def genus(self) -> int:
        return self.record.genus

    @property
    def effective_slice_genus(self) -> int:
        # a slice knot bounds a disk, whatever the recorded band count says
        return 0 if self.record.is_slice else self.record.slice_genus


def validate_record(record: KnotRecord) -> Union[ValidatedKnot, list[str]]:
    """Check a record's internal consistency.

    Returns a ValidatedKnot on success, otherwise the list of violations.
    """
    problems: list[str] = []
    try:
        poly = normalize(record.alexander)
    except AlexanderError as exc:
        return [f"alexander: {exc}"]
    if record.genus < 0:
        problems.append("genus must be nonnegative")
    if record.slice_genus < 0:
        problems.append("slice_genus must be nonnegative")
    if record.slice_genus > record.genus:
        problems.append(
            f"slice_genus {record.slice_genus} exceeds genus {record.genus}"
        )
    if record.is_slice and record.slice_genus != 0:
        problems.append("slice knot must have slice_genus 0")
    if poly.degree > record.genus:
        problems.append(
            f"polynomial degree {poly.degree} exceeds genus {record.genus}"
        )
    if record.genus == 0 and poly.degree != 0:
        problems.append("genus 0 forces a trivial polynomial")
    problems.extend(hfk_consistency(poly, record.genus, record.hfk_top))
    if problems:
        return problems
    return ValidatedKnot(record=record, polynomial=poly, torsion=torsion_profile(poly))


class Tier(enum.Enum):
    """How much local surgery data the model carries."""

    LSPACE = "lspace"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class ExplicitModelData:
    """User-supplied local data: a V/H window plus reduced summands per level."""

    vh: VHSequence
    reduced: dict[int, tuple[ReducedSummand, ...]]

    @classmethod
    def from_json(cls, obj: dict) -> "ExplicitModelData":
        vh = VHSequence.from_json(obj["vh"])
        reduced: dict[int, tuple[ReducedSummand, ...]] = {}
        for key, summands in obj.get("reduced", {}).items():
            level = int(key)
            reduced[level] = tuple(ReducedSummand.from_json(s) for s in summands)
        return cls(vh=vh, reduced=reduced)

    def as_json(self) -> dict:
        return {
            "vh": self.vh.as_json(),
            "reduced": {
                str(level): [s.as_json() for s in summands]
                for level, summands in sorted(self.reduced.items())
            },
        }


@dataclass(frozen=True)
class KnotModel:
    """A validated knot together with enough local data to build cones."""

    knot: ValidatedKnot
    tier: Tier
    vh: VHFunction
    reduced: dict[int, tuple[ReducedSummand, ...]]

    @property
    def name(self) -> str:
        return self.knot.name

    @property
    def genus(self) -> int:
        return self.knot.genus

    def v_power(self, k: int) -> int:
        return self.vh.v(k)

    def h_power(self, k: int) -> int:
        return self.vh.h(k)

    def reduced_at(self, level: int) -> tuple[ReducedSummand, ...]:
        return self.reduced.get(level, ())


def build_model(
    validated: ValidatedKnot,
    tier: Union[Tier, str, None] = None,
    explicit_data: Optional[ExplicitModelData] = None,
) -> KnotModel:
    """Attach local surgery data to a validated knot.

    In the L-space tier the knot must satisfy the staircase constraints
    (nonnegative unit-step torsion); the local data is then determined by
    the polynomial and the reduced part is empty.  In the explicit tier the
    supplied V/H window is validated against the slice genus bound and
    reduced summands must sit at levels strictly inside (-genus, genus).
    Omitting the tier selects it from the presence of explicit_data.
    """
    if tier is None:
        tier = Tier.LSPACE if explicit_data is None else Tier.EXPLICIT
    elif isinstance(tier, str):
        tier = Tier(tier)

    if tier is Tier.LSPACE:
        if explicit_data is not None:
            raise ValueError(
                f"{validated.name}: the L-space tier takes no explicit data"
            )
        try:
            seq = lspace_vh(validated.polynomial, validated.genus)
        except LSpaceModelError as exc:
            raise LSpaceModelError(
                f"{validated.name}: {exc}; supply explicit model data"
            ) from None
        vh = VHFunction.from_sequence(seq, extend=True)
        return KnotModel(knot=validated, tier=Tier.LSPACE, vh=vh, reduced={})

    if explicit_data is None:
        raise ValueError(f"{validated.name}: the explicit tier requires V/H data")
    problems = validate_vh(explicit_data.vh, g_star=validated.effective_slice_genus)
    if problems:
        raise ValueError(
            f"{validated.name}: invalid V/H data: " + "; ".join(problems)
        )
    g = validated.genus
    for level, summands in explicit_data.reduced.items():
        if not summands:
            raise ValueError(f"{validated.name}: empty summand list at level {level}")
        if g == 0 or not (-g < level < g):
            raise ValueError(
                f"{validated.name}: reduced summand level {level} outside (-{g}, {g})"
            )
    try:
        vh = VHFunction.from_sequence(explicit_data.vh, extend=True)
    except VHWindowError:
        # nonzero right edge: keep the window strict and let the cone layer
        # fail loudly if it ever needs a level the data does not cover
        vh = VHFunction.from_sequence(explicit_data.vh, extend=False)
    return KnotModel(
        knot=validated,
        tier=Tier.EXPLICIT,
        vh=vh,
        reduced=dict(explicit_data.reduced),
    )


def load_knot_table(stream: io.TextIOBase, fmt: str = "csv") -> Iterator[tuple[int, Union[KnotRecord, str]]]:
    """Stream records out of a table, yielding (line_number, record-or-error).

    csv requires the exact header line; json expects one object per line.
    Parse failures yield the error message instead of a record, so callers
    can keep going and report partial results.
    """
    if fmt == "csv":
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty table: missing header") from None
        if tuple(h.strip() for h in header) != CSV_COLUMNS:
            raise SchemaError(
                "bad header: expected " + ",".join(CSV_COLUMNS)
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not f.strip() for f in row):
                continue
            try:
                yield lineno, _record_from_fields(row)
            except (ParseFieldError, SchemaError) as exc:
                yield lineno, str(exc)
    elif fmt == "json":
        for lineno, line in enumerate(stream, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                yield lineno, parse_knot_record(text, fmt="json")
            except (ParseFieldError, SchemaError) as exc:
                yield lineno, str(exc)
    else:
        raise ValueError(f"unknown format {fmt!r}")
