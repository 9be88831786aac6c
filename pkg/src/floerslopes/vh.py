"""Nonnegative surgery coefficients V_k / H_k over a symmetric window.

V_k and H_k measure the U-powers by which the two canonical degree-shifting
maps out of the large-surgery homology at Alexander level k act on the tower
summand.  They obey a rigid shape: H_k mirrors V_(-k), V is a staircase with
unit steps on the positive side, V_k vanishes at and beyond the slice genus,
and V strictly dominates H on the negative side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .alexander import AlexanderPolynomial, torsion_coefficient, torsion_profile

__all__ = [
    "VHWindowError",
    "LSpaceModelError",
    "VHSequence",
    "VHFunction",
    "validate_vh",
    "lspace_vh",
    "mirror_complete",
]


class VHWindowError(ValueError):
    """A level outside the stored window was requested and cannot be auto-extended."""


class LSpaceModelError(ValueError):
    """The polynomial is not consistent with a staircase (L-space) model."""


@dataclass(frozen=True)
class VHSequence:
    """V and H values over an integer window [k_min, k_max]."""

    k_min: int
    k_max: int
    v: tuple[int, ...]
    h: tuple[int, ...]

    def __post_init__(self) -> None:
        width = self.k_max - self.k_min + 1
        if width <= 0:
            raise ValueError("empty window")
        if len(self.v) != width or len(self.h) != width:
            raise ValueError("V/H length does not match the window")

    @classmethod
    def from_v(cls, k_min: int, k_max: int, v_map: Mapping[int, int],
               h_map: Optional[Mapping[int, int]] = None) -> "VHSequence":
        """Build from a V map, completing H by the mirror symmetry H_k = V_(-k).

        Completion needs -k inside the window for every k, i.e. a window
        symmetric about 0, unless H is supplied explicitly.
        """
        keys = range(k_min, k_max + 1)
        missing = [k for k in keys if k not in v_map]
        if missing:
            raise ValueError(f"V missing levels {missing}")
        v = tuple(int(v_map[k]) for k in keys)
        if h_map is not None:
            missing = [k for k in keys if k not in h_map]
            if missing:
                raise ValueError(f"H missing levels {missing}")
            h = tuple(int(h_map[k]) for k in keys)
        else:
            if k_min != -k_max:
                raise ValueError("window must be symmetric about 0 to mirror-complete H")
            h = tuple(int(v_map[-k]) for k in keys)
        return cls(k_min, k_max, v, h)

    def contains(self, k: int) -> bool:
        return self.k_min <= k <= self.k_max

    def v_at(self, k: int) -> int:
        if not self.contains(k):
            raise VHWindowError(
                f"V_{k} outside window [{self.k_min}, {self.k_max}] and cannot be auto-extended"
            )
        return self.v[k - self.k_min]

    def h_at(self, k: int) -> int:
        if not self.contains(k):
            raise VHWindowError(
                f"H_{k} outside window [{self.k_min}, {self.k_max}] and cannot be auto-extended"
            )
        return self.h[k - self.k_min]

    def as_json(self) -> dict:
        return {
            "window": [self.k_min, self.k_max],
            "V": {str(k): self.v_at(k) for k in range(self.k_min, self.k_max + 1)},
            "H": {str(k): self.h_at(k) for k in range(self.k_min, self.k_max + 1)},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "VHSequence":
        k_min, k_max = (int(x) for x in obj["window"])
        v_map = {int(k): int(val) for k, val in obj["V"].items()}
        h_map = None
        if "H" in obj and obj["H"]:
            h_map = {int(k): int(val) for k, val in obj["H"].items()}
        return cls.from_v(k_min, k_max, v_map, h_map)


def mirror_complete(seq: VHSequence) -> VHSequence:
    """Replace H by the mirror completion of V.  Applying twice is the identity."""
    return VHSequence.from_v(
        seq.k_min, seq.k_max,
        {k: seq.v_at(k) for k in range(seq.k_min, seq.k_max + 1)},
    )


def validate_vh(seq: VHSequence, g_star: Optional[int] = None) -> list[str]:
    """Check every structural constraint the sequence must satisfy.

    Returns the (possibly empty) list of violations; never raises.  Checks:
    symmetric window, nonnegativity, H_k = V_(-k), unit staircase steps on
    the positive side, V_0 = H_0 with strict V/H ordering off zero, and the
    slice-genus bound V_k <= max(0, g* - k) when g* is supplied.
    """
    out: list[str] = []
    if seq.k_min != -seq.k_max:
        out.append(f"window [{seq.k_min}, {seq.k_max}] is not symmetric about 0")
        return out
    rng = range(seq.k_min, seq.k_max + 1)
    for k in rng:
        if seq.v_at(k) < 0:
            out.append(f"V_{k} = {seq.v_at(k)} is negative")
        if seq.h_at(k) < 0:
            out.append(f"H_{k} = {seq.h_at(k)} is negative")
    for k in rng:
        if seq.h_at(k) != seq.v_at(-k):
            out.append(f"mirror symmetry H_{k} = V_{-k} fails ({seq.h_at(k)} != {seq.v_at(-k)})")
    for k in rng:
        if k > 0:
            lo, hi = seq.v_at(k), seq.v_at(k - 1)
            if not (lo <= hi <= lo + 1):
                out.append(f"violation of monotonicity (V_{k} <= V_{k-1} <= V_{k}+1 fails: {lo}, {hi})")
    if seq.contains(0) and seq.v_at(0) != seq.h_at(0):
        out.append(f"V_0 = {seq.v_at(0)} != H_0 = {seq.h_at(0)}")
    for k in rng:
        if k < 0 and not seq.v_at(k) > seq.h_at(k):
            out.append(f"V_{k} = {seq.v_at(k)} must exceed H_{k} = {seq.h_at(k)} below level 0")
        if k > 0 and not seq.v_at(k) < seq.h_at(k):
            out.append(f"V_{k} = {seq.v_at(k)} must be below H_{k} = {seq.h_at(k)} above level 0")
    if g_star is not None:
        for k in rng:
            bound = max(0, g_star - k)
            if seq.v_at(k) > bound:
                out.append(f"V_{k} = {seq.v_at(k)} exceeds the slice-genus bound max(0, {g_star}-{k}) = {bound}")
    return out


class VHFunction:
    """Total map k -> (V_k, H_k) over all of Z, backing the cone engine.

    Three flavors: exact staircase formulas derived from a polynomial
    (unbounded window), a strict window lookup that raises VHWindowError
    outside its data, and an extended lookup that continues a validated
    window by V = 0 rightward and unit growth leftward.
    """

    def __init__(self, v_fn, label: str):
        self._v = v_fn
        self.label = label

    def v(self, k: int) -> int:
        return self._v(k)

    def h(self, k: int) -> int:
        # mirror symmetry is exact, so H never needs separate storage
        return self._v(-k)

    @classmethod
    def from_polynomial(cls, poly: AlexanderPolynomial) -> "VHFunction":
        """Staircase model: V_k = t_k for k >= 0, V_k = t_(-k) - k below."""
        def v(k: int) -> int:
            if k >= 0:
                return torsion_coefficient(poly, k)
            return torsion_coefficient(poly, -k) - k
        return cls(v, "staircase")

    @classmethod
    def from_sequence(cls, seq: VHSequence, extend: bool = False) -> "VHFunction":
        if not extend:
            return cls(seq.v_at, "window")
        if seq.v_at(seq.k_max) != 0:
            raise VHWindowError(
                f"cannot extend: V_{seq.k_max} = {seq.v_at(seq.k_max)} nonzero at the right edge"
            )

        def v(k: int) -> int:
            if k > seq.k_max:
                return 0
            if k < seq.k_min:
                return seq.v_at(seq.k_min) + (seq.k_min - k)
            return seq.v_at(k)

        return cls(v, "window-extended")


def lspace_vh(poly: AlexanderPolynomial, genus: int,
              window: Optional[tuple[int, int]] = None) -> VHSequence:
    """Derive V/H from the torsion staircase of an L-space knot polynomial.

    Requires every torsion coefficient nonnegative and consecutive drops
    t_(i-1) - t_i in {0, 1} (which forces the top coefficient to be +1).
    V_k = t_k on k >= 0; H_k = V_k + k there, an identity imported from the
    surgery-formula literature and quarantined in this one constructor; both
    extend to negative k through the exact mirror symmetry.
    """
    profile = torsion_profile(poly)
    bad = [i for i, t in enumerate(profile.values) if t < 0]
    if bad:
        raise LSpaceModelError(
            f"staircase model is inconsistent with negative torsion coefficient "
            f"t_{bad[0]} = {profile.values[bad[0]]}"
        )
    d = poly.degree
    for i in range(1, d + 1):
        step = profile.at(i - 1) - profile.at(i)
        if step not in (0, 1):
            raise LSpaceModelError(
                f"torsion step t_{i-1} - t_{i} = {step} is not 0 or 1; not a staircase"
            )
    if window is None:
        w = max(genus, 1) + 4
        window = (-w, w)
    fn = VHFunction.from_polynomial(poly)
    k_min, k_max = window
    return VHSequence.from_v(
        k_min, k_max,
        {k: fn.v(k) for k in range(k_min, k_max + 1)},
        {k: fn.h(k) for k in range(k_min, k_max + 1)},
    )
