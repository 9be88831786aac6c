"""Finite F2 models of the graded pieces entering surgery mapping cones.

Towers are truncated polynomial quotients F2[U]-span{e_0..e_(N-1)} with
U e_j = e_(j-1) and U e_0 = 0; reduced summands are parallel cyclic
U-torsion modules.  Maps between them are plain matrices over F2, and the
exact kernel/cokernel machinery below runs on bitmask-packed columns so
that cone-sized systems reduce in microseconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TruncatedTower",
    "ReducedSummand",
    "BlockMap",
    "KernelCokernel",
    "tower_power_map",
    "f2_kernel_cokernel",
    "gf2_row_reduce",
    "gf2_rank",
    "gf2_nullspace",
    "gf2_coker_basis",
]

EVEN = 0
ODD = 1


# ---------------------------------------------------------------------------
# bitmask core: matrices as lists of column masks (bit r = row r)

def _eliminate_columns(cols: Sequence[int]) -> tuple[dict[int, tuple[int, int]], list[int]]:
    """Column elimination with combination tracking.

    Args:
        cols: column bitmasks (bit r set = entry 1 in row r).

    Returns:
        (pivots, kernel): pivots maps a leading-row index to the reduced
        column and the mask (over column indices) that produced it; kernel
        lists the combination masks of columns that reduced to zero.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for j, col in enumerate(cols):
        mask = 1 << j
        while col:
            lead = col.bit_length() - 1
            if lead in pivots:
                pcol, pmask = pivots[lead]
                col ^= pcol
                mask ^= pmask
            else:
                pivots[lead] = (col, mask)
                break
        if col == 0:
            kernel.append(mask)
    return pivots, kernel


def bit_rank(cols: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for col in cols:
        while col:
            lead = col.bit_length() - 1
            if lead in pivots:
                col ^= pivots[lead]
            else:
                pivots[lead] = col
                break
    return len(pivots)


def bit_nullspace(cols: Sequence[int]) -> list[int]:
    """Kernel basis of the column map, as masks over column indices."""
    _, kernel = _eliminate_columns(cols)
    return kernel


def bit_pivot_rows(cols: Sequence[int]) -> set[int]:
    pivots, _ = _eliminate_columns(cols)
    return set(pivots.keys())


# ---------------------------------------------------------------------------
# numpy front end, matching the dense GF(2) conventions used elsewhere

def _matrix_to_cols(matrix: np.ndarray) -> list[int]:
    m = np.asarray(matrix, dtype=np.uint8) & 1
    nrows, ncols = m.shape
    cols = []
    for j in range(ncols):
        val = 0
        for r in range(nrows):
            if m[r, j]:
                val |= 1 << r
        cols.append(val)
    return cols


def gf2_row_reduce(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a binary matrix in place over GF(2).

    Args:
        matrix: 2d array of 0/1 entries.

    Returns:
        (reduced, pivot_cols): the row-echelon form and the pivot column
        indices, in order.
    """
    r = (np.array(matrix, dtype=np.uint8) & 1).copy()
    nrows, ncols = r.shape
    pivot_cols: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        sub = np.nonzero(r[row:, col])[0]
        if sub.size == 0:
            continue
        pivot = row + int(sub[0])
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        others = np.nonzero(r[:, col])[0]
        for i in others:
            if i != row:
                r[i, :] ^= r[row, :]
        pivot_cols.append(col)
        row += 1
    return r, pivot_cols


def gf2_rank(matrix: np.ndarray) -> int:
    return bit_rank(_matrix_to_cols(matrix))


def gf2_nullspace(matrix: np.ndarray) -> np.ndarray:
    """Kernel basis as rows of a (nullity x ncols) 0/1 array."""
    m = np.asarray(matrix, dtype=np.uint8)
    ncols = m.shape[1]
    masks = bit_nullspace(_matrix_to_cols(m))
    out = np.zeros((len(masks), ncols), dtype=np.uint8)
    for i, mask in enumerate(masks):
        for j in range(ncols):
            if (mask >> j) & 1:
                out[i, j] = 1
    return out


def gf2_coker_basis(matrix: np.ndarray) -> np.ndarray:
    """Representatives of a basis of target / image, as rows.

    The image's column echelon form leads in some set of rows; the standard
    vectors on the complementary rows descend to a cokernel basis.
    """
    m = np.asarray(matrix, dtype=np.uint8)
    nrows = m.shape[0]
    pivot_rows = bit_pivot_rows(_matrix_to_cols(m))
    free = [r for r in range(nrows) if r not in pivot_rows]
    out = np.zeros((len(free), nrows), dtype=np.uint8)
    for i, r in enumerate(free):
        out[i, r] = 1
    return out


# ---------------------------------------------------------------------------
# graded module models

@dataclass(frozen=True)
class TruncatedTower:
    """Truncation ker(U^depth) of the half-infinite tower; e_0 sits at the bottom."""

    depth: int
    parity: int = EVEN

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("tower depth must be positive")
        if self.parity not in (EVEN, ODD):
            raise ValueError("parity must be 0 (even) or 1 (odd)")

    def u_matrix(self) -> np.ndarray:
        u = np.zeros((self.depth, self.depth), dtype=np.uint8)
        for j in range(1, self.depth):
            u[j - 1, j] = 1
        return u


@dataclass(frozen=True)
class ReducedSummand:
    """`rank` parallel cyclic summands F2[U]/U^u_order with shared v/h images.

    v_image / h_image are level sets in the target tower (images of each
    copy's top generator).  An image must be U-torsion of order at most
    u_order, i.e. supported below level u_order; odd-parity summands must
    have empty images because the target tower is even and the maps
    preserve the Z/2 grading.
    """

    rank: int = 1
    parity: int = EVEN
    u_order: int = 1
    v_image: tuple[int, ...] = ()
    h_image: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be a positive integer")
        if self.u_order < 1:
            raise ValueError("u_order must be a positive integer")
        if self.parity not in (EVEN, ODD):
            raise ValueError("parity must be 0 (even) or 1 (odd)")
        for name, img in (("v_image", self.v_image), ("h_image", self.h_image)):
            if any(l < 0 for l in img):
                raise ValueError(f"{name} levels must be nonnegative")
            if any(l >= self.u_order for l in img):
                raise ValueError(
                    f"{name} {img} is not U-torsion of order <= u_order = {self.u_order}"
                )
            if self.parity == ODD and img:
                raise ValueError(
                    "odd-parity summand cannot map to the even target tower"
                )

    @property
    def dimension(self) -> int:
        return self.rank * self.u_order

    def as_json(self) -> dict:
        return {
            "rank": self.rank,
            "parity": "odd" if self.parity else "even",
            "u_order": self.u_order,
            "v_image": list(self.v_image),
            "h_image": list(self.h_image),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReducedSummand":
        parity = obj.get("parity", "even")
        if parity in ("even", 0):
            p = EVEN
        elif parity in ("odd", 1):
            p = ODD
        else:
            raise ValueError(f"unknown parity {parity!r}")
        return cls(
            rank=int(obj.get("rank", 1)),
            parity=p,
            u_order=int(obj.get("u_order", 1)),
            v_image=tuple(int(x) for x in obj.get("v_image", ())),
            h_image=tuple(int(x) for x in obj.get("h_image", ())),
        )


@dataclass(frozen=True)
class BlockMap:
    """A matrix between truncated towers, carrying its own U-equivariance check."""

    source: TruncatedTower
    target: TruncatedTower
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.uint8) & 1
        if m.shape != (self.target.depth, self.source.depth):
            raise ValueError(
                f"matrix shape {m.shape} does not match towers "
                f"({self.target.depth} x {self.source.depth})"
            )
        object.__setattr__(self, "matrix", m)

    def check_u_equivariant(self) -> bool:
        left = (self.matrix @ self.source.u_matrix()) & 1
        right = (self.target.u_matrix() @ self.matrix) & 1
        return bool(np.array_equal(left, right))

    def compose(self, other: "BlockMap") -> "BlockMap":
        """self after other (matrix product self.matrix @ other.matrix)."""
        if other.target.depth != self.source.depth:
            raise ValueError("composition shape mismatch")
        return BlockMap(other.source, self.target, (self.matrix @ other.matrix) & 1)


def tower_power_map(source: TruncatedTower, target: TruncatedTower, n: int) -> BlockMap:
    """The map e_j -> e_(j-n) (zero below the bottom), i.e. multiplication by U^n."""
    if n < 0:
        raise ValueError("U-power must be nonnegative")
    m = np.zeros((target.depth, source.depth), dtype=np.uint8)
    for j in range(source.depth):
        if 0 <= j - n < target.depth:
            m[j - n, j] = 1
    return BlockMap(source, target, m)


@dataclass(frozen=True)
class KernelCokernel:
    kernel: np.ndarray
    kernel_parity: int
    cokernel: np.ndarray
    cokernel_parity: int

    @property
    def kernel_rank(self) -> int:
        return self.kernel.shape[0]

    @property
    def cokernel_rank(self) -> int:
        return self.cokernel.shape[0]


def f2_kernel_cokernel(block_map: BlockMap) -> KernelCokernel:
    """Exact kernel and cokernel bases of a block map, tagged with parities."""
    assert block_map.check_u_equivariant(), "block map is not U-equivariant"
    return KernelCokernel(
        kernel=gf2_nullspace(block_map.matrix),
        kernel_parity=block_map.source.parity,
        cokernel=gf2_coker_basis(block_map.matrix),
        cokernel_parity=block_map.target.parity,
    )
