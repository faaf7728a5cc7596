"""Rank certification, subspace arithmetic, and exact integer elimination."""

import math

import numpy as np
import pytest

from ellr.linalg import (
    AmbiguousRankError,
    RankPolicy,
    Subspace,
    svd_rank,
    kernel,
    image,
    subspace_sum,
    subspace_intersect,
    principal_angles,
    subspace_equal,
    exact_rank,
    exact_nullspace,
    exact_row_space_intersection,
)

RNG = np.random.default_rng(42)


def _random_rank(m, n, r):
    A = RNG.standard_normal((m, r)) + 1j * RNG.standard_normal((m, r))
    B = RNG.standard_normal((r, n)) + 1j * RNG.standard_normal((r, n))
    return A @ B


def test_svd_rank_exact():
    M = _random_rank(8, 6, 3)
    rank, gap = svd_rank(M)
    assert rank == 3 and gap > 1e4


def test_svd_rank_zero_and_full():
    assert svd_rank(np.zeros((4, 4))) == (0, math.inf)
    rank, gap = svd_rank(np.eye(5))
    assert rank == 5 and gap == math.inf


def test_svd_rank_ambiguous_raises():
    M = np.diag([1.0, 1e-8, 1e-10])
    with pytest.raises(AmbiguousRankError):
        svd_rank(M, RankPolicy(rel_threshold=1e-9, min_gap=1e4))


def test_rank_policy_validation():
    with pytest.raises(ValueError):
        RankPolicy(rel_threshold=2.0)
    with pytest.raises(ValueError):
        RankPolicy(min_gap=0.5)


def test_kernel_image_orthonormal_and_complementary():
    M = _random_rank(7, 7, 4)
    K, I = kernel(M), image(M)
    assert K.dim == 3 and I.dim == 4
    assert np.allclose(K.basis.conj().T @ K.basis, np.eye(3), atol=1e-12)
    assert np.max(np.abs(M @ K.basis)) < 1e-9 * np.max(np.abs(M))


def test_subspace_sum_and_intersect():
    e = np.eye(4, dtype=complex)
    A = Subspace(4, e[:, :2], 0.0)
    B = Subspace(4, e[:, 1:3], 0.0)
    assert subspace_sum([A, B]).dim == 3
    C = subspace_intersect([A, B])
    assert C.dim == 1
    assert abs(abs(C.basis[1, 0]) - 1) < 1e-12


def test_intersect_with_full_and_zero():
    full, zero = Subspace.full(3), Subspace.zero(3)
    M = _random_rank(3, 3, 2)
    S = image(M)
    assert subspace_intersect([S, full]).dim == S.dim
    assert subspace_intersect([S, zero]).dim == 0
    assert subspace_sum([S, zero]).dim == S.dim


def test_principal_angles_and_equality():
    M = _random_rank(6, 6, 3)
    S = image(M)
    Q = image(M @ (RNG.standard_normal((6, 6)) + 1j * RNG.standard_normal((6, 6))))
    # same column space under generic right multiplication... not guaranteed;
    # use an explicit change of basis instead
    T = Subspace(6, np.linalg.qr(S.basis @ _unitary(3))[0], 0.0)
    eq, worst = subspace_equal(S, T)
    assert eq and worst < 1e-6
    other = image(_random_rank(6, 6, 3))
    eq2, worst2 = subspace_equal(S, other)
    assert not eq2


def _unitary(k):
    Q, _ = np.linalg.qr(RNG.standard_normal((k, k)) + 1j * RNG.standard_normal((k, k)))
    return Q


def test_subspace_equal_dim_mismatch():
    A = image(_random_rank(5, 5, 2))
    B = image(_random_rank(5, 5, 3))
    eq, _ = subspace_equal(A, B)
    assert not eq


def test_exact_rank_small():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[1, 0], [0, 1]]) == 2
    assert exact_rank([]) == 0
    assert exact_rank([[0, 0], [0, 0]]) == 0


def test_exact_rank_matches_numpy():
    M = RNG.integers(-5, 6, size=(10, 8))
    assert exact_rank(M.tolist()) == np.linalg.matrix_rank(M.astype(float))


def test_exact_nullspace():
    rows = [[1, 1, 0], [0, 1, 1]]
    basis = exact_nullspace(rows)
    assert len(basis) == 1
    v = np.array(basis[0])
    assert np.all(np.array(rows) @ v == 0)


def test_exact_row_space_intersection():
    A = [[1, 0, 0], [0, 1, 0]]
    B = [[0, 1, 0], [0, 0, 1]]
    inter = exact_row_space_intersection(A, B, 3)
    assert exact_rank(inter) == 1
    v = np.array(inter[0])
    assert v[0] == 0 and v[2] == 0 and v[1] != 0


def test_exact_intersection_with_empty_is_zero():
    # empty row list spans the zero space, so any intersection with it is zero
    A = [[1, 2, 3]]
    inter = exact_row_space_intersection(A, [], 3)
    assert exact_rank(inter) == 0
