"""Record parsing, validation, model construction, and table streaming."""

import io
import json

import pytest

from floerslopes.graded import ODD, ReducedSummand
from floerslopes.knotdata import (
    CSV_COLUMNS,
    ExplicitModelData,
    KnotRecord,
    ParseFieldError,
    SchemaError,
    Tier,
    ValidatedKnot,
    build_model,
    load_knot_table,
    parse_knot_record,
    serialize_knot_record,
    validate_record,
)
from floerslopes.vh import LSpaceModelError, VHSequence, VHWindowError


TREFOIL = KnotRecord("trefoil", (-1, 1), 1, 1, False, True, (1, 0))
FIGURE8 = KnotRecord("figure8", (3, -1), 1, 1, False, True, (0, 1))
STEVEDORE = KnotRecord("stevedore", (5, -2), 1, 0, True, True, (0, 2))


def test_parse_csv_line():
    rec = parse_knot_record("trefoil,-1;1,1,1,false,true,1:0", fmt="csv")
    assert rec == TREFOIL
    rec = parse_knot_record("unknot,1,0,0,true,true,", fmt="csv")
    assert rec.hfk_top is None and rec.is_slice


def test_parse_json_line():
    line = json.dumps({
        "name": "figure8", "alexander": [3, -1], "genus": 1,
        "slice_genus": 1, "is_slice": False, "is_alternating": True,
        "hfk_top": [0, 1],
    })
    assert parse_knot_record(line, fmt="json") == FIGURE8
    with pytest.raises(SchemaError, match="missing keys"):
        parse_knot_record('{"name": "x"}', fmt="json")
    with pytest.raises(SchemaError, match="invalid json"):
        parse_knot_record("{not json", fmt="json")


def test_parse_field_errors():
    with pytest.raises(ParseFieldError, match="alexander"):
        parse_knot_record("k,a;b,1,1,false,true,", fmt="csv")
    with pytest.raises(ParseFieldError, match="genus"):
        parse_knot_record("k,1,x,1,false,true,", fmt="csv")
    with pytest.raises(ParseFieldError, match="is_slice"):
        parse_knot_record("k,1,1,1,maybe,true,", fmt="csv")
    with pytest.raises(ParseFieldError, match="hfk_top"):
        parse_knot_record("k,1,1,1,false,true,1:2:3", fmt="csv")
    with pytest.raises(SchemaError, match="fields"):
        parse_knot_record("k,1,1", fmt="csv")


def test_serialize_round_trip():
    for rec in (TREFOIL, FIGURE8, STEVEDORE,
                KnotRecord("unknot", (1,), 0, 0, True, True, None)):
        line = serialize_knot_record(rec, fmt="csv")
        assert parse_knot_record(line, fmt="csv") == rec
        obj = serialize_knot_record(rec, fmt="json")
        assert parse_knot_record(json.dumps(obj), fmt="json") == rec


def test_validate_accepts_fixture_records():
    for rec in (TREFOIL, FIGURE8, STEVEDORE):
        vk = validate_record(rec)
        assert isinstance(vk, ValidatedKnot), vk
    vk = validate_record(STEVEDORE)
    assert vk.torsion.values == (-2,)
    assert vk.effective_slice_genus == 0


def test_validate_rejects_inconsistencies():
    bad = validate_record(KnotRecord("k", (-1, 1), 1, 2, False, True, None))
    assert any("slice_genus 2 exceeds genus 1" in p for p in bad)
    bad = validate_record(KnotRecord("k", (-1, 1), 0, 0, False, True, None))
    assert any("degree" in p for p in bad)
    bad = validate_record(KnotRecord("k", (1, 1), 1, 1, False, True, None))
    assert any("alexander" in p for p in bad)
    bad = validate_record(KnotRecord("k", (-1, 1), 1, 1, True, True, None))
    assert any("slice knot must have slice_genus 0" in p for p in bad)
    bad = validate_record(KnotRecord("k", (-1, 1), 1, 1, False, True, (0, 1)))
    assert any("Euler characteristic" in p for p in bad)
    bad = validate_record(KnotRecord("k", (1,), 1, -1, False, True, None))
    assert any("nonnegative" in p for p in bad)


def test_build_model_lspace_tier():
    model = build_model(validate_record(TREFOIL))
    assert model.tier is Tier.LSPACE
    assert model.v_power(0) == 1 and model.v_power(1) == 0
    assert model.h_power(1) == 1  # H_1 = V_-1 = t_1 + 1
    assert model.v_power(40) == 0  # extended far beyond the window
    assert model.h_power(-40) == 0
    assert model.reduced_at(0) == ()


def test_build_model_lspace_rejects_wrong_sign():
    vk = validate_record(FIGURE8)
    with pytest.raises(LSpaceModelError, match="t_0 = -1"):
        build_model(vk)
    with pytest.raises(LSpaceModelError, match="supply explicit model data"):
        build_model(vk, tier=Tier.LSPACE)


def test_build_model_explicit_tier():
    vk = validate_record(FIGURE8)
    data = ExplicitModelData(
        vh=VHSequence.from_v(-2, 2, {-2: 2, -1: 1, 0: 0, 1: 0, 2: 0}),
        reduced={0: (ReducedSummand(rank=1, parity=ODD, u_order=1),)},
    )
    model = build_model(vk, tier="explicit", explicit_data=data)
    assert model.tier is Tier.EXPLICIT
    assert model.v_power(0) == 0
    assert model.v_power(7) == 0 and model.v_power(-5) == 5
    assert model.reduced_at(0)[0].parity == ODD

    with pytest.raises(ValueError, match="requires V/H data"):
        build_model(vk, tier=Tier.EXPLICIT)
    with pytest.raises(ValueError, match="takes no explicit data"):
        build_model(validate_record(TREFOIL), tier=Tier.LSPACE, explicit_data=data)


def test_build_model_explicit_validates_vh_and_levels():
    vk = validate_record(FIGURE8)
    bad_vh = ExplicitModelData(
        vh=VHSequence.from_v(-1, 1, {-1: 3, 0: 2, 1: 1}),  # violates V_k <= max(0, g*-k)
        reduced={},
    )
    with pytest.raises(ValueError, match="invalid V/H data"):
        build_model(vk, tier="explicit", explicit_data=bad_vh)

    good_vh = VHSequence.from_v(-2, 2, {-2: 2, -1: 1, 0: 0, 1: 0, 2: 0})
    with pytest.raises(ValueError, match="outside"):
        build_model(vk, tier="explicit", explicit_data=ExplicitModelData(
            vh=good_vh, reduced={1: (ReducedSummand(),)}))
    with pytest.raises(ValueError, match="empty summand list"):
        build_model(vk, tier="explicit", explicit_data=ExplicitModelData(
            vh=good_vh, reduced={0: ()}))


def test_explicit_model_data_json_round_trip():
    data = ExplicitModelData(
        vh=VHSequence.from_v(-2, 2, {-2: 2, -1: 1, 0: 0, 1: 0, 2: 0}),
        reduced={0: (ReducedSummand(rank=2, parity=ODD, u_order=1),),
                 -1: (ReducedSummand(u_order=2, v_image=(0,)),)},
    )
    again = ExplicitModelData.from_json(data.as_json())
    assert again == data


def test_load_knot_table_csv():
    text = ",".join(CSV_COLUMNS) + "\n" + (
        "trefoil,-1;1,1,1,false,true,1:0\n"
        "\n"
        "broken,zz,1,1,false,true,\n"
        "unknot,1,0,0,true,true,\n"
    )
    rows = list(load_knot_table(io.StringIO(text), fmt="csv"))
    assert len(rows) == 3
    assert rows[0] == (2, TREFOIL)
    assert rows[1][0] == 4 and isinstance(rows[1][1], str) and "alexander" in rows[1][1]
    assert rows[2][1].name == "unknot"


def test_load_knot_table_rejects_bad_header():
    with pytest.raises(SchemaError, match="bad header"):
        list(load_knot_table(io.StringIO("name,genus\nx,1\n"), fmt="csv"))
    with pytest.raises(SchemaError, match="missing header"):
        list(load_knot_table(io.StringIO(""), fmt="csv"))


def test_load_knot_table_json_lines():
    lines = [
        json.dumps(serialize_knot_record(TREFOIL, fmt="json")),
        "",
        '{"bad": true}',
        json.dumps(serialize_knot_record(STEVEDORE, fmt="json")),
    ]
    rows = list(load_knot_table(io.StringIO("\n".join(lines) + "\n"), fmt="json"))
    assert rows[0] == (1, TREFOIL)
    assert isinstance(rows[1][1], str)
    assert rows[2][1] == STEVEDORE
