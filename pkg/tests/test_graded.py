"""GF(2) linear algebra against brute force, and the graded module models."""

import itertools
import random

import numpy as np
import pytest

from floerslopes.graded import (
    EVEN,
    ODD,
    BlockMap,
    ReducedSummand,
    TruncatedTower,
    f2_kernel_cokernel,
    gf2_coker_basis,
    gf2_nullspace,
    gf2_rank,
    gf2_row_reduce,
    tower_power_map,
)


def brute_force_kernel(matrix):
    """Every kernel vector of a small 0/1 matrix, by exhaustion."""
    m = np.asarray(matrix, dtype=np.uint8)
    ncols = m.shape[1]
    vectors = []
    for bits in itertools.product((0, 1), repeat=ncols):
        vec = np.array(bits, dtype=np.uint8)
        if not ((m @ vec) & 1).any():
            vectors.append(tuple(bits))
    return set(vectors)


def span(rows, ncols):
    out = set()
    rows = [tuple(int(x) for x in r) for r in rows]
    for picks in itertools.product((0, 1), repeat=len(rows)):
        acc = [0] * ncols
        for take, row in zip(picks, rows):
            if take:
                acc = [a ^ b for a, b in zip(acc, row)]
        out.add(tuple(acc))
    return out


def test_nullspace_matches_brute_force():
    rng = random.Random(42)
    for _ in range(150):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        m = np.array(
            [[rng.randint(0, 1) for _ in range(ncols)] for _ in range(nrows)],
            dtype=np.uint8,
        )
        basis = gf2_nullspace(m)
        assert basis.shape[0] == ncols - gf2_rank(m)
        assert span(basis, ncols) == brute_force_kernel(m)


def test_rank_against_row_reduce():
    rng = random.Random(3)
    for _ in range(100):
        nrows, ncols = rng.randint(1, 8), rng.randint(1, 8)
        m = np.array(
            [[rng.randint(0, 1) for _ in range(ncols)] for _ in range(nrows)],
            dtype=np.uint8,
        )
        reduced, pivots = gf2_row_reduce(m)
        assert gf2_rank(m) == len(pivots)
        nonzero_rows = int(np.count_nonzero(reduced.any(axis=1)))
        assert nonzero_rows == len(pivots)


def test_coker_basis_complements_image():
    rng = random.Random(9)
    for _ in range(100):
        nrows, ncols = rng.randint(1, 7), rng.randint(1, 7)
        m = np.array(
            [[rng.randint(0, 1) for _ in range(ncols)] for _ in range(nrows)],
            dtype=np.uint8,
        )
        coker = gf2_coker_basis(m)
        assert coker.shape[0] == nrows - gf2_rank(m)
        stacked = np.concatenate([m, coker.T], axis=1) if coker.size else m
        assert gf2_rank(stacked) == gf2_rank(m) + coker.shape[0]


def test_tower_power_map_kernel_cokernel():
    for depth in (1, 3, 7):
        for n in (0, 1, 2, depth, depth + 2):
            bm = tower_power_map(TruncatedTower(depth), TruncatedTower(depth), n)
            assert bm.check_u_equivariant()
            kc = f2_kernel_cokernel(bm)
            assert kc.kernel_rank == min(n, depth)
            assert kc.cokernel_rank == min(n, depth)


def test_block_map_shape_and_composition():
    with pytest.raises(ValueError, match="shape"):
        BlockMap(TruncatedTower(3), TruncatedTower(4), np.zeros((3, 3), dtype=np.uint8))
    u2 = tower_power_map(TruncatedTower(5), TruncatedTower(5), 2)
    u1 = tower_power_map(TruncatedTower(5), TruncatedTower(5), 1)
    u3 = tower_power_map(TruncatedTower(5), TruncatedTower(5), 3)
    assert np.array_equal(u1.compose(u2).matrix, u3.matrix)
    assert u1.compose(u2).check_u_equivariant()


def test_random_power_compositions_stay_equivariant():
    rng = random.Random(5)
    for _ in range(50):
        depth = rng.randint(2, 9)
        a = tower_power_map(TruncatedTower(depth), TruncatedTower(depth), rng.randint(0, depth))
        b = tower_power_map(TruncatedTower(depth), TruncatedTower(depth), rng.randint(0, depth))
        assert a.compose(b).check_u_equivariant()


def test_truncated_tower_validation():
    with pytest.raises(ValueError):
        TruncatedTower(0)
    with pytest.raises(ValueError):
        TruncatedTower(3, parity=2)
    u = TruncatedTower(4).u_matrix()
    assert u.sum() == 3 and u[0, 1] == 1


def test_reduced_summand_validation():
    ReducedSummand(rank=2, parity=EVEN, u_order=3, v_image=(0, 2), h_image=(1,))
    with pytest.raises(ValueError, match="rank"):
        ReducedSummand(rank=0)
    with pytest.raises(ValueError, match="u_order"):
        ReducedSummand(u_order=0)
    with pytest.raises(ValueError, match="U-torsion"):
        ReducedSummand(u_order=2, v_image=(2,))
    with pytest.raises(ValueError, match="nonnegative"):
        ReducedSummand(u_order=2, v_image=(-1,))
    with pytest.raises(ValueError, match="odd-parity"):
        ReducedSummand(parity=ODD, u_order=2, v_image=(0,))
    assert ReducedSummand(rank=3, u_order=2).dimension == 6


def test_reduced_summand_json_round_trip():
    s = ReducedSummand(rank=2, parity=ODD, u_order=4)
    assert ReducedSummand.from_json(s.as_json()) == s
    t = ReducedSummand(rank=1, parity=EVEN, u_order=3, v_image=(1,), h_image=(0, 2))
    assert ReducedSummand.from_json(t.as_json()) == t
    with pytest.raises(ValueError, match="parity"):
        ReducedSummand.from_json({"parity": "sideways"})
