"""Exclusion clauses, cell composition, and the global verdict."""

import random
from fractions import Fraction

import pytest

from floerslopes.knotdata import KnotRecord, build_model, validate_record
from floerslopes.obstruct import (
    VERDICT_CONSTRAINED,
    VERDICT_NONE,
    VERDICT_UNCONSTRAINED,
    Reason,
    Verdict,
    check_negative_sf,
    check_positive_sf,
    four_ball_genus_obstruction,
    hyperbolic_bound,
    lens_window,
    sf_window,
    slice_obstruction,
)


def vk(name, coeffs, genus, slice_genus, is_slice=False, alternating=True, hfk=None):
    out = validate_record(KnotRecord(name, tuple(coeffs), genus, slice_genus,
                                     is_slice, alternating, hfk))
    assert not isinstance(out, list), out
    return out


UNKNOT = vk("unknot", [1], 0, 0, is_slice=True)
TREFOIL = vk("trefoil", [-1, 1], 1, 1, hfk=(1, 0))
FIGURE8 = vk("figure8", [3, -1], 1, 1, hfk=(0, 1))
STEVEDORE = vk("stevedore", [5, -2], 1, 0, is_slice=True, hfk=(0, 2))
CINQUEFOIL = vk("cinquefoil", [1, -1, 1], 2, 2, hfk=(1, 0))
KT = vk("kt", [1], 2, 0, is_slice=True, alternating=False)
SYNTH9 = vk("synth9", [1, 0, -1, 1], 3, 3, alternating=False)


def test_verdict_invariant():
    with pytest.raises(ValueError):
        Verdict("Excluded", ())
    with pytest.raises(ValueError):
        Verdict("NotExcluded", (Reason("x", "y"),))
    with pytest.raises(ValueError):
        Verdict("Definitely")
    v = Verdict("Excluded", (Reason("a", "b"),))
    assert v.excluded and v.as_json()["status"] == "Excluded"


def test_positive_side_torsion_sign():
    assert not check_positive_sf(TREFOIL, 5).excluded
    v = check_positive_sf(FIGURE8, Fraction(7, 2))
    assert v.excluded
    assert any(r.theorem == "positive-torsion-sign" for r in v.reasons)
    # slope-independence
    assert check_positive_sf(FIGURE8, Fraction(1, 9)).excluded
    with pytest.raises(ValueError, match="positive"):
        check_positive_sf(TREFOIL, -2)


def test_positive_side_parity_clause():
    v = check_positive_sf(STEVEDORE, 1)
    assert any(r.theorem == "top-hfk-parity-positive" for r in v.reasons)
    # trivial polynomial with genus 2: degree deficit forces odd classes
    v = check_positive_sf(KT, 1)
    assert any(r.theorem == "top-hfk-parity-positive" for r in v.reasons)
    assert "deg(Delta)" in [r for r in v.reasons if r.theorem == "top-hfk-parity-positive"][0].detail


def test_negative_side_small_slope_and_size_bound():
    v = check_negative_sf(CINQUEFOIL, 2)
    names = {r.theorem for r in v.reasons}
    assert "negative-torsion-sign-small-slope" in names
    assert "surgery-size-torsion-bound" in names
    assert not check_negative_sf(CINQUEFOIL, 3).excluded
    assert not check_negative_sf(CINQUEFOIL, Fraction(7, 2)).excluded


def test_negative_side_bound_monotone_in_slope():
    # once a slope clears every bound, every larger slope does too
    rng = random.Random(1)
    for _ in range(50):
        slopes = sorted(Fraction(rng.randint(1, 40), rng.randint(1, 5)) for _ in range(2))
        lo, hi = slopes
        if check_negative_sf(SYNTH9, lo).status == "NotExcluded":
            assert check_negative_sf(SYNTH9, hi).status == "NotExcluded"


def test_negative_side_slice_genus_clause():
    # t_1 = 1 > max(g* - 1, 0) = 0 when g* = 1: excluded at every slope
    knot = vk("tight", [1, -1, 1], 2, 1)
    v = check_negative_sf(knot, 1000)
    assert v.excluded
    assert any(r.theorem == "slice-genus-torsion-bound" for r in v.reasons)


def test_negative_side_parity_clause_strict_boundary():
    v4 = check_negative_sf(SYNTH9, 4)
    assert any(r.theorem == "top-hfk-parity-negative" for r in v4.reasons)
    v5 = check_negative_sf(SYNTH9, 5)
    assert not v5.excluded
    assert any("strict bound 5" in note for note in v5.notes)


def test_criterion_bound_is_exactly_five():
    report = sf_window(SYNTH9)
    cell = report.cells[("negative", "r>0")]
    assert cell.exclusion == "interval"
    assert cell.bound == Fraction(5)
    assert check_negative_sf(SYNTH9, 4).excluded
    assert not check_negative_sf(SYNTH9, 5).excluded


def test_slice_obstruction_needs_flag_and_both_signs():
    with pytest.raises(ValueError, match="not slice-flagged"):
        slice_obstruction(TREFOIL)
    assert not slice_obstruction(STEVEDORE).excluded
    mixed = vk("mixed", [5, -3, 1], 2, 0, is_slice=True)  # t = (-1, 1)
    v = slice_obstruction(mixed)
    assert v.excluded
    assert v.reasons[0].theorem == "slice-mixed-torsion-signs"


def test_slice_obstruction_verifies_halves_on_models():
    model = build_model(vk("unknot2", [1], 0, 0, is_slice=True))
    v = slice_obstruction(model)
    assert any("d_(1/2) = 1/2" in note for note in v.notes)


def test_four_ball_genus_gap():
    assert four_ball_genus_obstruction(KT).excluded
    assert not four_ball_genus_obstruction(TREFOIL).excluded
    assert not four_ball_genus_obstruction(UNKNOT).excluded
    # degree matches genus: no gap even with small g*
    assert not four_ball_genus_obstruction(STEVEDORE).excluded


def test_sf_window_verdicts():
    assert sf_window(UNKNOT).verdict == VERDICT_UNCONSTRAINED
    assert sf_window(TREFOIL).verdict == VERDICT_UNCONSTRAINED
    assert sf_window(FIGURE8).verdict == VERDICT_CONSTRAINED
    assert sf_window(STEVEDORE).verdict == VERDICT_CONSTRAINED
    assert sf_window(CINQUEFOIL).verdict == VERDICT_CONSTRAINED
    assert sf_window(KT).verdict == VERDICT_NONE


def test_sf_window_cells_mirror_coherent():
    for knot in (UNKNOT, TREFOIL, FIGURE8, STEVEDORE, CINQUEFOIL, KT, SYNTH9):
        report = sf_window(knot)
        assert report.cells[("positive", "r>0")] == report.cells[("positive", "r<0")]
        assert report.cells[("negative", "r>0")] == report.cells[("negative", "r<0")]


def test_sf_window_cell_content():
    report = sf_window(FIGURE8)
    assert report.cells[("positive", "r>0")].exclusion == "all"
    assert report.cells[("negative", "r>0")].exclusion == "none"
    report = sf_window(KT)
    assert all(cell.exclusion == "all" for cell in report.cells.values())
    assert any(r.theorem == "four-ball-genus-gap"
               for r in report.cells[("negative", "r<0")].reasons)


def test_informational_windows():
    assert hyperbolic_bound(0) is None
    assert hyperbolic_bound(1) == pytest.approx(3 * 2 ** 1.75)
    assert lens_window(4) is None
    assert lens_window(5) == (18, 19)
    report = sf_window(CINQUEFOIL)
    assert report.lens_slopes is None
    assert report.hyperbolic_above == pytest.approx(6 * 2 ** 1.75)


def test_report_json_is_deterministic():
    import json
    a = json.dumps(sf_window(SYNTH9).to_json(), sort_keys=True)
    b = json.dumps(sf_window(SYNTH9).to_json(), sort_keys=True)
    assert a == b
    obj = sf_window(SYNTH9).to_json()
    assert obj["verdict"] == VERDICT_CONSTRAINED
    assert obj["cells"]["negative"]["r>0"]["bound"] == "5/1"
    assert obj["informational"]["lens_window_abs_slope"] is None  # genus 3: empty window
