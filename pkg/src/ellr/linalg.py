"""Dense complex linear algebra with tolerance-governed rank decisions,
subspace arithmetic, and exact integer elimination for the classical oracle.

Rank decisions are only accepted when the singular-value gap across the cut
exceeds ``RankPolicy.min_gap``; otherwise an :class:`AmbiguousRankError` is
raised so callers can move the sample point instead of silently reporting a
rank from a blurred spectrum.  Matrices are max-abs-normalized before the SVD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class AmbiguousRankError(RuntimeError):
    """Singular-value gap too small to certify an integer rank."""

    def __init__(self, rank, gap, min_gap):
        super().__init__(
            f"ambiguous rank: candidate {rank} with gap {gap:.3e} < required {min_gap:.3e}"
        )
        self.rank = rank
        self.gap = gap


@dataclass(frozen=True)
class RankPolicy:
    rel_threshold: float = 1e-9
    min_gap: float = 1e4

    def __post_init__(self):
        if not 0 < self.rel_threshold < 1:
            raise ValueError("rel_threshold must lie in (0, 1)")
        if not self.min_gap > 1:
            raise ValueError("min_gap must exceed 1")


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^ambient_dim given by orthonormal basis columns."""

    ambient_dim: int
    basis: np.ndarray  # shape (ambient_dim, dim), orthonormal columns
    tol_used: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, np.eye(ambient_dim, dtype=complex), 0.0)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, np.zeros((ambient_dim, 0), dtype=complex), 0.0)


def _normalized_svd(M: np.ndarray):
    M = np.asarray(M, dtype=complex)
    scale = np.max(np.abs(M)) if M.size else 0.0
    if scale == 0.0 or not np.isfinite(scale):
        scale = 1.0
    U, s, Vh = np.linalg.svd(M / scale)
    return U, s, Vh


def svd_rank(M: np.ndarray, policy: RankPolicy | None = None) -> tuple[int, float]:
    """Numerical rank with gap certification.

    Returns (rank, gap) where gap is the ratio of the smallest kept to the
    largest dropped singular value (inf when nothing is dropped).  Raises
    AmbiguousRankError when gap < policy.min_gap.
    """
    policy = policy or RankPolicy()
    _, s, _ = _normalized_svd(M)
    if s.size == 0 or s[0] == 0.0:
        return 0, math.inf
    cut = policy.rel_threshold * s[0]
    rank = int(np.sum(s > cut))
    if rank == s.size or s[rank] == 0.0:
        gap = math.inf
    else:
        gap = float(s[rank - 1] / s[rank]) if rank > 0 else math.inf
    if gap < policy.min_gap:
        raise AmbiguousRankError(rank, gap, policy.min_gap)
    return rank, gap


def kernel(M: np.ndarray, policy: RankPolicy | None = None) -> Subspace:
    """Orthonormal basis of the null space at the certified rank cut."""
    policy = policy or RankPolicy()
    M = np.asarray(M, dtype=complex)
    rank, _ = svd_rank(M, policy)
    _, _, Vh = _normalized_svd(M)
    basis = Vh[rank:].conj().T
    return Subspace(M.shape[1], basis, policy.rel_threshold)


def image(M: np.ndarray, policy: RankPolicy | None = None) -> Subspace:
    """Orthonormal basis of the column space at the certified rank cut."""
    policy = policy or RankPolicy()
    M = np.asarray(M, dtype=complex)
    rank, _ = svd_rank(M, policy)
    U, _, _ = _normalized_svd(M)
    return Subspace(M.shape[0], U[:, :rank], policy.rel_threshold)


def _check_same_ambient(spaces):
    dims = {S.ambient_dim for S in spaces}
    if len(dims) != 1:
        raise ValueError("subspaces live in different ambient spaces")
    return dims.pop()


def subspace_sum(spaces, policy: RankPolicy | None = None) -> Subspace:
    """Sum of subspaces: concatenate bases and re-orthonormalize at the rank cut."""
    policy = policy or RankPolicy()
    ambient = _check_same_ambient(spaces)
    stacked = np.hstack([S.basis for S in spaces])
    if stacked.shape[1] == 0:
        return Subspace.zero(ambient)
    rank, _ = svd_rank(stacked, policy)
    U, _, _ = _normalized_svd(stacked)
    return Subspace(ambient, U[:, :rank], policy.rel_threshold)


def subspace_intersect(spaces, policy: RankPolicy | None = None) -> Subspace:
    """Intersection via stacked orthogonal-projector complements.

    v lies in the intersection iff (I - P_i) v = 0 for every member, so the
    intersection is the kernel of the vertically stacked complements.
    """
    policy = policy or RankPolicy()
    ambient = _check_same_ambient(spaces)
    eye = np.eye(ambient, dtype=complex)
    stacked = np.vstack([eye - S.projector() for S in spaces])
    return kernel(stacked, policy)


def principal_angles(S1: Subspace, S2: Subspace) -> np.ndarray:
    """Principal angles (radians) between two subspaces, ascending."""
    if S1.dim == 0 or S2.dim == 0:
        return np.zeros(0)
    s = np.linalg.svd(S1.basis.conj().T @ S2.basis, compute_uv=False)
    return np.arccos(np.clip(s, 0.0, 1.0))[::-1][: min(S1.dim, S2.dim)]


def subspace_equal(S1: Subspace, S2: Subspace, tol: float = 1e-6):
    """Equality test: dims match and the largest principal angle is below tol."""
    if S1.ambient_dim != S2.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    if S1.dim != S2.dim:
        return False, math.pi / 2 if (S1.dim or S2.dim) else 0.0
    if S1.dim == 0:
        return True, 0.0
    angles = principal_angles(S1, S2)
    worst = float(np.max(angles))
    return worst < tol, worst


# ---------------------------------------------------------------------------
# Exact integer linear algebra (classical oracle support)
# ---------------------------------------------------------------------------


def exact_rank(rows) -> int:
    """Exact rank of an integer matrix (list of rows) by fraction-free
    Bareiss elimination over arbitrary-precision integers."""
    mat = [[int(x) for x in row] for row in rows]
    if not mat or not mat[0]:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        for r in range(row + 1, nrows):
            for c in range(col + 1, ncols):
                mat[r][c] = (mat[row][col] * mat[r][c] - mat[r][col] * mat[row][c]) // prev
            mat[r][col] = 0
        prev = mat[row][col]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def exact_nullspace(rows):
    """Integer basis (as rows) of {v : M v = 0} for an integer matrix M.

    Gaussian elimination over Fractions, denominators cleared afterwards.
    """
    mat = [[Fraction(int(x)) for x in row] for row in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = mat[row][col]
        mat[row] = [x / inv for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for prow, pcol in enumerate(pivots):
            vec[pcol] = -mat[prow][fc]
        lcm = 1
        for x in vec:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        basis.append([int(x * lcm) for x in vec])
    return basis


def exact_row_space_intersection(rows_a, rows_b, ncols: int):
    """Integer row basis of rowspace(A) ∩ rowspace(B).

    Uses annihilators: the intersection is the annihilator of the sum of the
    two annihilators.
    """
    ann_a = exact_nullspace(rows_a) if rows_a else [_unit(ncols, c) for c in range(ncols)]
    ann_b = exact_nullspace(rows_b) if rows_b else [_unit(ncols, c) for c in range(ncols)]
    return exact_nullspace(ann_a + ann_b)


def _unit(ncols, c):
    row = [0] * ncols
    row[c] = 1
    return row
