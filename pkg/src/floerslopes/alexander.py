"""Exact arithmetic on symmetrized Alexander polynomials.

A knot's symmetrized Alexander polynomial a0 + sum_{i>0} a_i (T^i + T^-i)
is stored as the integer half-vector (a0, ..., ad), normalized so that the
value at T = 1 is +1.  Everything derived here (torsion coefficients,
top-grading Euler characteristics) is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

__all__ = [
    "AlexanderError",
    "AlexanderPolynomial",
    "TorsionProfile",
    "normalize",
    "torsion_coefficient",
    "torsion_profile",
    "hfk_consistency",
]


class AlexanderError(ValueError):
    """Raised for coefficient vectors that cannot be normalized."""


@dataclass(frozen=True)
class AlexanderPolynomial:
    """Normalized half-vector (a0..ad); the full polynomial is symmetric in T <-> 1/T.

    Construction enforces the normal form: no trailing zero coefficient and
    value +1 at T = 1.  Use :func:`normalize` to bring raw table data (which
    may carry an overall sign of -1) into this form.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise AlexanderError("empty coefficient vector")
        if len(self.coeffs) > 1 and self.coeffs[-1] == 0:
            raise AlexanderError("trailing zero coefficient; call normalize() first")
        one = self.evaluate_at_one()
        if one != 1:
            raise AlexanderError(
                f"polynomial evaluates to {one} at T=1, expected +1; call normalize() first"
            )

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, i: int) -> int:
        """a_|i| with zeros beyond the degree."""
        i = abs(i)
        return self.coeffs[i] if i <= self.degree else 0

    def evaluate_at_one(self) -> int:
        return self.coeffs[0] + 2 * sum(self.coeffs[1:])

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, 0, -1):
            a = self.coeffs[i]
            if a:
                terms.append(f"{a:+d}*(T^{i}+T^-{i})")
        if self.coeffs[0]:
            terms.append(f"{self.coeffs[0]:+d}")
        return " ".join(terms) if terms else "0"


def normalize(raw: Iterable[int]) -> AlexanderPolynomial:
    """Strip trailing zeros and fix the overall sign so the value at T=1 is +1.

    Raises AlexanderError when the value at T=1 is not +-1 (no knot has such
    an Alexander polynomial, so the input data is corrupt).
    """
    coeffs = [int(c) for c in raw]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise AlexanderError("empty coefficient vector")
    one = coeffs[0] + 2 * sum(coeffs[1:])
    if one == -1:
        coeffs = [-c for c in coeffs]
    elif one != 1:
        raise AlexanderError(f"polynomial evaluates to {one} at T=1, must be +1 or -1")
    return AlexanderPolynomial(tuple(coeffs))


def torsion_coefficient(poly: AlexanderPolynomial, i: int) -> int:
    """t_i = sum_{j>=1} j * a_(|i|+j), computed directly.

    Symmetric in i and exactly zero once |i| reaches the degree.
    """
    i = abs(i)
    d = poly.degree
    if i >= d:
        return 0
    return sum(j * poly.coeffs[i + j] for j in range(1, d - i + 1))


@dataclass(frozen=True)
class TorsionProfile:
    """All potentially nonzero torsion coefficients t_0..t_(d-1) of a polynomial."""

    values: tuple[int, ...]
    has_positive: bool = field(init=False)
    has_negative: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "has_positive", any(v > 0 for v in self.values))
        object.__setattr__(self, "has_negative", any(v < 0 for v in self.values))

    def at(self, i: int) -> int:
        i = abs(i)
        return self.values[i] if i < len(self.values) else 0


def torsion_profile(poly: AlexanderPolynomial) -> TorsionProfile:
    """Compute t_0..t_(d-1) in one reverse pass.

    Uses the telescoping identity t_(i-1) - t_i = sum_{j>=i} a_j, so each
    step costs one addition instead of the quadratic double loop.
    """
    d = poly.degree
    values = [0] * d
    t_next = 0
    suffix = poly.coeffs[d] if d > 0 else 0
    for i in range(d, 0, -1):
        values[i - 1] = t_next + suffix
        t_next = values[i - 1]
        if i - 1 >= 1:
            suffix += poly.coeffs[i - 1]
    profile = TorsionProfile(tuple(values))
    # cheap self-check of the telescoped pass against the direct formula
    if d > 0 and profile.values[0] != torsion_coefficient(poly, 0):
        raise AssertionError("torsion telescoping disagrees with the direct formula")
    return profile


def hfk_consistency(
    poly: AlexanderPolynomial, genus: int, hfk_top: Optional[Sequence[int]]
) -> list[str]:
    """Check a top-grading (even_rank, odd_rank) pair against the polynomial.

    The top Alexander grading of knot Floer homology detects the genus (it is
    nontrivial there) and its Euler characteristic equals the top polynomial
    coefficient, which is zero when the polynomial degree falls below the
    genus.  Returns the list of violated constraints, empty when consistent.
    """
    violations: list[str] = []
    if hfk_top is None:
        return violations
    even, odd = int(hfk_top[0]), int(hfk_top[1])
    if even < 0 or odd < 0:
        violations.append(f"top-grading ranks must be nonnegative, got ({even}, {odd})")
        return violations
    if even + odd == 0:
        violations.append("top-grading group must be nontrivial (genus detection)")
    if poly.degree > genus:
        violations.append(
            f"Alexander degree {poly.degree} exceeds genus {genus}"
        )
        return violations
    expected = poly.coefficient(genus) if poly.degree == genus else 0
    if even - odd != expected:
        violations.append(
            f"top-grading Euler characteristic {even - odd} != top coefficient {expected}"
        )
    return violations
