"""Exact-arithmetic Heegaard Floer surgery invariants and the slope
obstructions they impose on Seifert fibered Dehn surgeries."""

from .alexander import (
    AlexanderError,
    AlexanderPolynomial,
    TorsionProfile,
    normalize,
    torsion_coefficient,
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
from .graded import ReducedSummand, gf2_nullspace, gf2_rank, gf2_row_reduce
from .knotdata import (
    ExplicitModelData,
    KnotModel,
    KnotRecord,
    SchemaError,
    Tier,
    ValidatedKnot,
    build_model,
    load_knot_table,
    parse_knot_record,
    serialize_knot_record,
    validate_record,
)
from .cone import (
    ConeError,
    HFPlusSummary,
    Slope,
    SurjectivityError,
    TruncationInstability,
    build_surgery_cone,
    build_zero_surgery_cone,
    check_DT_surjective,
    cone_homology,
    lens_d,
    slice_zero_surgery_halves,
    surgery_d,
    surgery_homology,
    zero_surgery_homology,
    zero_surgery_spinc0_summary,
)
from .obstruct import (
    ObstructionReport,
    Orientation,
    Reason,
    Verdict,
    check_negative_sf,
    check_positive_sf,
    four_ball_genus_obstruction,
    sf_window,
    slice_obstruction,
)

__version__ = "0.1.0"

__all__ = [
    "AlexanderError",
    "AlexanderPolynomial",
    "TorsionProfile",
    "normalize",
    "torsion_coefficient",
    "torsion_profile",
    "LSpaceModelError",
    "VHFunction",
    "VHSequence",
    "VHWindowError",
    "lspace_vh",
    "validate_vh",
    "ReducedSummand",
    "gf2_nullspace",
    "gf2_rank",
    "gf2_row_reduce",
    "ExplicitModelData",
    "KnotModel",
    "KnotRecord",
    "SchemaError",
    "Tier",
    "ValidatedKnot",
    "build_model",
    "load_knot_table",
    "parse_knot_record",
    "serialize_knot_record",
    "validate_record",
    "ConeError",
    "HFPlusSummary",
    "Slope",
    "SurjectivityError",
    "TruncationInstability",
    "build_surgery_cone",
    "build_zero_surgery_cone",
    "check_DT_surjective",
    "cone_homology",
    "lens_d",
    "slice_zero_surgery_halves",
    "surgery_d",
    "surgery_homology",
    "zero_surgery_homology",
    "zero_surgery_spinc0_summary",
    "ObstructionReport",
    "Orientation",
    "Reason",
    "Verdict",
    "check_negative_sf",
    "check_positive_sf",
    "four_ball_genus_obstruction",
    "sf_window",
    "slice_obstruction",
    "__version__",
]
