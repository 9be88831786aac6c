"""One-directional exclusion tests for Seifert fibered surgery slopes.

Every test here can only rule slopes out, never certify existence.  The
slope plane is split into four cells, a Seifert orientation crossed with a
slope sign; negative slopes are handled through the mirror knot, whose
relevant inputs (polynomial, genus, slice genus, top parity split) all
coincide with the original's, so the cells are computed from one shared
profile and the labeling convention keeps the orientation fixed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .knotdata import KnotModel, ValidatedKnot
from .cone import slice_zero_surgery_halves

__all__ = [
    "Orientation",
    "Reason",
    "Verdict",
    "SlopeExclusion",
    "ObstructionReport",
    "check_positive_sf",
    "check_negative_sf",
    "slice_obstruction",
    "four_ball_genus_obstruction",
    "sf_window",
    "hyperbolic_bound",
    "lens_window",
]

EXCLUDED = "Excluded"
NOT_EXCLUDED = "NotExcluded"


class Orientation(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class Reason:
    """Which exclusion clause fired, with a self-contained explanation."""

    theorem: str
    detail: str

    def as_json(self) -> dict:
        return {"theorem": self.theorem, "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    """Exclusion status for one (knot, slope, orientation) query."""

    status: str
    reasons: tuple[Reason, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.status not in (EXCLUDED, NOT_EXCLUDED):
            raise ValueError(f"unknown status {self.status!r}")
        if (self.status == EXCLUDED) != bool(self.reasons):
            raise ValueError("Excluded requires reasons; NotExcluded forbids them")

    @property
    def excluded(self) -> bool:
        return self.status == EXCLUDED

    def as_json(self) -> dict:
        return {
            "status": self.status,
            "reasons": [r.as_json() for r in self.reasons],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class SlopeExclusion:
    """What one orientation/sign cell excludes: everything, an interval, or nothing.

    An interval exclusion covers 0 < |r| < bound; the bound itself is never
    excluded (strict inequality convention).
    """

    exclusion: str  # "all" | "interval" | "none"
    bound: Optional[Fraction]
    reasons: tuple[Reason, ...]

    def as_json(self) -> dict:
        return {
            "exclusion": self.exclusion,
            "bound": _frac_str(self.bound),
            "reasons": [r.as_json() for r in self.reasons],
        }


def _frac_str(x: Optional[Fraction]) -> Optional[str]:
    if x is None:
        return None
    return f"{x.numerator}/{x.denominator}"


def _validated(model: Union[KnotModel, ValidatedKnot]) -> ValidatedKnot:
    if isinstance(model, KnotModel):
        return model.knot
    if isinstance(model, ValidatedKnot):
        return model
    raise TypeError("expected a KnotModel or ValidatedKnot")


def _as_positive_fraction(r) -> Fraction:
    frac = Fraction(r)
    if frac <= 0:
        raise ValueError(f"slope must be positive, got {frac}")
    return frac


# ---------------------------------------------------------------------------
# top-grading parity facts

@dataclass(frozen=True)
class _TopParity:
    """Three-valued knowledge about the top knot Floer parity split."""

    even_positive: Optional[bool]
    odd_positive: Optional[bool]
    source: str


def _top_parity(vk: ValidatedKnot) -> _TopParity:
    rec = vk.record
    if rec.hfk_top is not None:
        even, odd = rec.hfk_top
        return _TopParity(even > 0, odd > 0, "recorded ranks")
    d, g = vk.polynomial.degree, rec.genus
    if d < g:
        # zero Euler characteristic with a nontrivial group: both parities occur
        return _TopParity(True, True, "degree deficit")
    a_top = vk.polynomial.coefficient(g)
    if a_top > 0:
        return _TopParity(True, None, "positive top coefficient")
    if a_top < 0:
        return _TopParity(None, True, "negative top coefficient")
    return _TopParity(None, None, "no data")


# ---------------------------------------------------------------------------
# orientation profiles

def _positive_sf_reasons(vk: ValidatedKnot) -> list[Reason]:
    reasons = []
    for idx, t in enumerate(vk.torsion.values):
        if t < 0:
            reasons.append(Reason(
                "positive-torsion-sign",
                f"torsion coefficient t_{idx} = {t} is negative; a positively "
                f"oriented Seifert fibered surgery forces every t_i >= 0",
            ))
    parity = _top_parity(vk)
    if parity.odd_positive is True or parity.even_positive is False:
        if parity.source == "degree deficit":
            detail = (
                f"deg(Delta) = {vk.polynomial.degree} < genus {vk.genus} forces equal "
                f"nonzero ranks in both parities at the top grading, but a positively "
                f"oriented Seifert fibered surgery needs the odd part to vanish"
            )
        else:
            detail = (
                f"top-grading parity split ({parity.source}) has a nontrivial odd part "
                f"or a trivial even part; a positively oriented Seifert fibered surgery "
                f"needs it trivial in odd parity and nontrivial in even parity"
            )
        reasons.append(Reason("top-hfk-parity-positive", detail))
    return reasons


def _negative_sf_profile(vk: ValidatedKnot) -> tuple[list[Reason], list[tuple[Fraction, Reason]]]:
    """Clauses for the negative orientation.

    Returns (unbounded, bounded): unbounded reasons exclude every positive
    slope; bounded entries (B, reason) exclude exactly 0 < r < B.
    """
    unbounded: list[Reason] = []
    bounded: list[tuple[Fraction, Reason]] = []
    g_star = vk.effective_slice_genus
    positive_levels = [
        (idx, t) for idx, t in enumerate(vk.torsion.values) if idx > 0 and t > 0
    ]

    if positive_levels:
        idx, t = positive_levels[0]
        bounded.append((Fraction(3), Reason(
            "negative-torsion-sign-small-slope",
            f"t_{idx} = {t} > 0 at a positive level, but slopes below 3 with a "
            f"negatively oriented Seifert fibered result force t_i <= 0 for all i > 0",
        )))
    for idx, t in positive_levels:
        bound = Fraction(2 * (idx + t) - 1)
        bounded.append((bound, Reason(
            "surgery-size-torsion-bound",
            f"t_{idx} = {t} violates t_i <= max(m - i, 0) for every integer "
            f"m < {idx + t}, so slopes below 2({idx} + {t}) - 1 = {bound} are excluded",
        )))
        if t > max(g_star - idx, 0):
            unbounded.append(Reason(
                "slice-genus-torsion-bound",
                f"t_{idx} = {t} exceeds max(g* - i, 0) = {max(g_star - idx, 0)} with "
                f"g* = {g_star}; no negatively oriented Seifert fibered surgery exists "
                f"at any positive slope",
            ))

    g = vk.genus
    if g > 1:
        parity = _top_parity(vk)
        if parity.even_positive is True or parity.odd_positive is False:
            bounded.append((Fraction(2 * g - 1), Reason(
                "top-hfk-parity-negative",
                f"top-grading parity split ({parity.source}) has a nontrivial even part "
                f"or a trivial odd part; slopes below 2g - 1 = {2 * g - 1} with a "
                f"negatively oriented Seifert fibered result need the opposite",
            )))
    return unbounded, bounded


def check_positive_sf(model: Union[KnotModel, ValidatedKnot], r) -> Verdict:
    """Can r-surgery (r > 0) be a positively oriented Seifert fibered space?

    The tests are slope-independent on this side: torsion sign and the top
    parity split either exclude every positive slope or none.
    """
    _as_positive_fraction(r)
    reasons = _positive_sf_reasons(_validated(model))
    if reasons:
        return Verdict(EXCLUDED, tuple(reasons))
    return Verdict(NOT_EXCLUDED)


def check_negative_sf(model: Union[KnotModel, ValidatedKnot], r) -> Verdict:
    """Can r-surgery (r > 0) be a negatively oriented Seifert fibered space?"""
    frac = _as_positive_fraction(r)
    unbounded, bounded = _negative_sf_profile(_validated(model))
    reasons = list(unbounded)
    notes = []
    for bound, reason in bounded:
        if frac < bound:
            reasons.append(reason)
        elif frac == bound:
            notes.append(
                f"slope {frac} sits exactly on the strict bound {bound} "
                f"({reason.theorem}); not excluded by convention"
            )
    if reasons:
        return Verdict(EXCLUDED, tuple(reasons), tuple(notes))
    return Verdict(NOT_EXCLUDED, notes=tuple(notes))


def slice_obstruction(model: Union[KnotModel, ValidatedKnot]) -> Verdict:
    """For slice knots: mixed torsion signs rule out every slope.

    Positive orientations need all t_i >= 0.  Negative orientations force
    t_i <= 0 at positive levels through the vanishing slice genus, and
    t_0 <= 0 through the zero-surgery halves d = (1/2, -1/2), which pin the
    reduced Euler characteristic to -t_0 >= 0.  Both signs present is
    therefore a contradiction for either orientation.
    """
    vk = _validated(model)
    if not vk.record.is_slice:
        raise ValueError(f"{vk.name} is not slice-flagged")
    notes = []
    if isinstance(model, KnotModel):
        d_plus, d_minus = slice_zero_surgery_halves(model)
        notes.append(
            f"zero-surgery halves verified: d_(1/2) = {d_plus}, d_(-1/2) = {d_minus}"
        )
    if vk.torsion.has_positive and vk.torsion.has_negative:
        return Verdict(EXCLUDED, (Reason(
            "slice-mixed-torsion-signs",
            "the torsion coefficients take both signs, which no Seifert fibered "
            "surgery on a slice knot allows in either orientation",
        ),), tuple(notes))
    return Verdict(NOT_EXCLUDED, notes=tuple(notes))


def four_ball_genus_obstruction(model: Union[KnotModel, ValidatedKnot]) -> Verdict:
    """Genus gap test: g > 1, deg(Delta) < g and g* < g exclude everything."""
    vk = _validated(model)
    g, g_star, d = vk.genus, vk.effective_slice_genus, vk.polynomial.degree
    if g > 1 and d < g and g_star < g:
        return Verdict(EXCLUDED, (Reason(
            "four-ball-genus-gap",
            f"genus {g} > 1 with deg(Delta) = {d} < {g} and slice genus "
            f"{g_star} < {g}: no surgery on such a knot is Seifert fibered",
        ),))
    return Verdict(NOT_EXCLUDED)


# ---------------------------------------------------------------------------
# informational windows

def hyperbolic_bound(genus: int) -> Optional[float]:
    """Slopes of absolute value beyond 3 * 2^(7/4) * g are hyperbolic."""
    if genus < 1:
        return None
    return 3.0 * 2.0 ** 1.75 * genus


def lens_window(genus: int) -> Optional[tuple[int, int]]:
    """Lens-space surgeries need 2g + 8 <= |r| <= 4g - 1; empty below genus 5."""
    lo, hi = 2 * genus + 8, 4 * genus - 1
    if lo > hi:
        return None
    return lo, hi


# ---------------------------------------------------------------------------
# the composed report

VERDICT_NONE = "NoSFSurgeryPossible"
VERDICT_CONSTRAINED = "Constrained"
VERDICT_UNCONSTRAINED = "Unconstrained"

CELL_KEYS = (
    ("positive", "r>0"),
    ("positive", "r<0"),
    ("negative", "r>0"),
    ("negative", "r<0"),
)


@dataclass(frozen=True)
class ObstructionReport:
    """Per-knot exclusion cells plus the global verdict and printed windows."""

    name: str
    cells: dict[tuple[str, str], SlopeExclusion]
    verdict: str
    hyperbolic_above: Optional[float]
    lens_slopes: Optional[tuple[int, int]]
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        cells = {}
        for (orientation, sign), cell in self.cells.items():
            cells.setdefault(orientation, {})[sign] = cell.as_json()
        return {
            "knot": self.name,
            "cells": cells,
            "verdict": self.verdict,
            "informational": {
                "hyperbolic_above_abs_slope": (
                    None if self.hyperbolic_above is None
                    else f"{self.hyperbolic_above:.6f}"
                ),
                "lens_window_abs_slope": (
                    None if self.lens_slopes is None else list(self.lens_slopes)
                ),
            },
            "notes": list(self.notes),
        }


def sf_window(model: Union[KnotModel, ValidatedKnot]) -> ObstructionReport:
    """Compose every exclusion test into the four orientation/sign cells.

    Negative slopes are checked through the mirror knot; since every input
    the tests consume is mirror-invariant, each r<0 cell coincides with its
    r>0 partner.  The global verdict is NoSFSurgeryPossible exactly when
    all four cells exclude everything.
    """
    vk = _validated(model)
    notes: list[str] = []

    global_reasons: list[Reason] = []
    if vk.record.is_slice:
        verdict = slice_obstruction(model)
        global_reasons.extend(verdict.reasons)
        notes.extend(verdict.notes)
    fb = four_ball_genus_obstruction(vk)
    global_reasons.extend(fb.reasons)

    pos_reasons = _positive_sf_reasons(vk)
    if pos_reasons or global_reasons:
        pos_cell = SlopeExclusion("all", None, tuple(global_reasons + pos_reasons))
    else:
        pos_cell = SlopeExclusion("none", None, ())

    neg_unbounded, neg_bounded = _negative_sf_profile(vk)
    if global_reasons or neg_unbounded:
        neg_cell = SlopeExclusion(
            "all", None, tuple(global_reasons + neg_unbounded + [r for _, r in neg_bounded])
        )
    elif neg_bounded:
        bound = max(b for b, _ in neg_bounded)
        neg_cell = SlopeExclusion("interval", bound, tuple(r for _, r in neg_bounded))
    else:
        neg_cell = SlopeExclusion("none", None, ())

    if vk.record.hfk_top is None and _top_parity(vk).source in ("positive top coefficient", "no data"):
        notes.append(
            "top-grading parity ranks not recorded; parity clauses use only "
            "what the polynomial forces"
        )

    cells = {
        ("positive", "r>0"): pos_cell,
        ("positive", "r<0"): pos_cell,
        ("negative", "r>0"): neg_cell,
        ("negative", "r<0"): neg_cell,
    }
    if all(c.exclusion == "all" for c in cells.values()):
        verdict_label = VERDICT_NONE
    elif all(c.exclusion == "none" for c in cells.values()):
        verdict_label = VERDICT_UNCONSTRAINED
    else:
        verdict_label = VERDICT_CONSTRAINED
    return ObstructionReport(
        name=vk.name,
        cells=cells,
        verdict=verdict_label,
        hyperbolic_above=hyperbolic_bound(vk.genus),
        lens_slopes=lens_window(vk.genus),
        notes=tuple(notes),
    )
