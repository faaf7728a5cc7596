"""Operators on tensor powers of the base vector space.

Builds dense matrices on V^{(x)d} (V = C^n, basis x_0..x_{n-1}, row-major
multi-index ordering): embeddings of two-site operators, permutation
operators, (anti)symmetrizers, the four telescoping chains of R-matrices,
the cumulative operators T_d and F_d, the rectangular two-parameter arrays
M_{a,b}, and the degree-d relation space of the associated quadratic
algebra.

Chains are indexed by one-based tensorand positions.  For an ascending
chain from position i to position j the arguments are spectral parameters
t_i, ..., t_{j-1}; partial sums are written Sum(p,q) = t_p + ... + t_q.

    ascending        : R(Sum(i,j-1))_{i,i+1} R(Sum(i+1,j-1))_{i+1,i+2} ... R(t_{j-1})_{j-1,j}
    ascending-rev    : R(t_i)_{i,i+1} R(Sum(i,i+1))_{i+1,i+2} ... R(Sum(i,j-1))_{j-1,j}
    descending       : R(Sum(i,j-1))_{j-1,j} ... R(Sum(i,q))_{q,q+1} ... R(t_i)_{i,i+1}
    descending-rev   : R(t_{j-1})_{j-1,j} R(Sum(j-2,j-1))_{j-2,j-1} ... R(Sum(i,j-1))_{i,i+1}

Descending chains take their arguments in display order t_{j-1}, ..., t_i.
All chains degenerate to the identity when they span a single position.

Everything is materialized densely; dimensions are capped at n^d <= 5^5.

Chain products can span an enormous dynamic range (individual R factors
reach 1e100 at desk scale), so every chain builder has a ``scaled`` mode
that normalizes each factor and the running product to unit max-abs while
accumulating the natural log of the removed scale.  Scaled mode returns a
:class:`ScaledOp`; rank/kernel/image questions only need its matrix part,
and identities between chain products compare matrix parts after matching
the log scales.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .rmatrix import AlgebraParams, r_matrix, r_plus_limit, HalfPeriodPoint
from .linalg import RankPolicy, Subspace, image, subspace_sum, subspace_intersect

MAX_TENSOR_DIM = 5 ** 5


class ScaledOp:
    """A matrix together with the natural log of a removed positive scale.

    Represents exp(log_scale) * mat; mat is kept at unit max-abs so long
    products never overflow.
    """

    __slots__ = ("mat", "log_scale")

    def __init__(self, mat: np.ndarray, log_scale: float = 0.0):
        self.mat = np.asarray(mat, dtype=complex)
        self.log_scale = float(log_scale)

    @staticmethod
    def identity(dim: int) -> "ScaledOp":
        return ScaledOp(np.eye(dim, dtype=complex), 0.0)

    @staticmethod
    def wrap(mat: np.ndarray) -> "ScaledOp":
        mat = np.asarray(mat, dtype=complex)
        s = float(np.max(np.abs(mat))) if mat.size else 0.0
        if s == 0.0 or not math.isfinite(s):
            return ScaledOp(mat, 0.0)
        return ScaledOp(mat / s, math.log(s))

    def __matmul__(self, other: "ScaledOp") -> "ScaledOp":
        # products are not renormalized: a tiny .mat after multiplying
        # unit-scale factors is real cancellation and must stay visible
        return ScaledOp(self.mat @ other.mat, self.log_scale + other.log_scale)

    def kron(self, other: "ScaledOp") -> "ScaledOp":
        return ScaledOp(np.kron(self.mat, other.mat), self.log_scale + other.log_scale)

    def dense(self) -> np.ndarray:
        return math.exp(self.log_scale) * self.mat

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.mat))) if self.mat.size else 0.0


def scaled_residual(left: ScaledOp, right: ScaledOp, floor: float = 1.0) -> float:
    """Max-abs residual between two scaled operators on a common scale.

    The operands are brought onto the larger log scale before subtracting,
    so the comparison is meaningful even when exp(log_scale) itself would
    overflow.  The denominator never drops below ``floor`` (factors enter
    chains at unit max-abs, so 1.0 is the natural yardstick): two products
    that each cancel to numerical zero therefore compare as equal instead
    of as noise divided by noise.
    """
    base = max(left.log_scale, right.log_scale)
    lm = left.mat * math.exp(left.log_scale - base)
    rm = right.mat * math.exp(right.log_scale - base)
    denom = max(np.max(np.abs(lm)), np.max(np.abs(rm)), floor)
    return float(np.max(np.abs(lm - rm)) / denom)


def _check_dim(n: int, d: int):
    if d < 0:
        raise ValueError("tensor degree must be non-negative")
    if n ** d > MAX_TENSOR_DIM:
        raise ValueError(
            f"tensor space dimension n^d = {n**d} exceeds the dense cap {MAX_TENSOR_DIM}"
        )


def embed_pair(op: np.ndarray, pos: int, n: int, d: int) -> np.ndarray:
    """Embed a two-site operator at tensorands (pos, pos+1), pos one-based."""
    _check_dim(n, d)
    if not 1 <= pos <= d - 1:
        raise ValueError(f"pair position {pos} out of range for degree {d}")
    left = np.eye(n ** (pos - 1))
    right = np.eye(n ** (d - pos - 1))
    return np.kron(np.kron(left, op), right)


def embed_single(op: np.ndarray, pos: int, n: int, d: int) -> np.ndarray:
    """Embed a one-site operator at tensorand pos, one-based."""
    _check_dim(n, d)
    if not 1 <= pos <= d:
        raise ValueError(f"position {pos} out of range for degree {d}")
    return np.kron(np.kron(np.eye(n ** (pos - 1)), op), np.eye(n ** (d - pos)))


def perm_op(sigma, n: int, d: int) -> np.ndarray:
    """Permutation operator: tensorand in slot s moves to slot sigma(s).

    sigma is a permutation of (0..d-1) in one-line notation (slot s -> sigma[s]).
    Acting on basis vectors, the slot-t factor of the output is the input
    factor from the unique slot s with sigma[s] = t.
    """
    _check_dim(n, d)
    sigma = list(sigma)
    if sorted(sigma) != list(range(d)):
        raise ValueError("sigma must be a permutation of 0..d-1")
    inv = [0] * d
    for s, t in enumerate(sigma):
        inv[t] = s
    dim = n ** d
    M = np.zeros((dim, dim))
    for idx in range(dim):
        digits = []
        t = idx
        for _ in range(d):
            digits.append(t % n)
            t //= n
        digits.reverse()
        out = 0
        for slot in range(d):
            out = out * n + digits[inv[slot]]
        M[out, idx] = 1.0
    return M


def perm_sign(sigma) -> int:
    """Sign of a permutation in one-line notation."""
    sigma = list(sigma)
    inversions = sum(
        1
        for a in range(len(sigma))
        for b in range(a + 1, len(sigma))
        if sigma[a] > sigma[b]
    )
    return -1 if inversions & 1 else 1


def symmetrizer(n: int, d: int) -> np.ndarray:
    """Sum of all d! permutation operators (no 1/d! normalization)."""
    _check_dim(n, d)
    return sum(perm_op(s, n, d) for s in itertools.permutations(range(d)))


def antisymmetrizer(n: int, d: int) -> np.ndarray:
    """Signed sum of all d! permutation operators (no 1/d! normalization)."""
    _check_dim(n, d)
    return sum(perm_sign(s) * perm_op(s, n, d) for s in itertools.permutations(range(d)))


def _default_rfun(params: AlgebraParams):
    return lambda z: r_matrix(params, z)


def chain_asc(params: AlgebraParams, d: int, i: int, j: int, ts, rfun=None,
              scaled: bool = False):
    """Ascending chain from position i to j with arguments ts = [t_i..t_{j-1}]."""
    return _chain(params, d, i, j, ts, rfun, descending=False, reverse=False,
                  scaled=scaled)


def chain_asc_rev(params: AlgebraParams, d: int, i: int, j: int, ts, rfun=None,
                  scaled: bool = False):
    """Reversed ascending chain from i to j with ts = [t_i..t_{j-1}]."""
    return _chain(params, d, i, j, ts, rfun, descending=False, reverse=True,
                  scaled=scaled)


def chain_desc(params: AlgebraParams, d: int, j: int, i: int, ts, rfun=None,
               scaled: bool = False):
    """Descending chain from position j down to i, ts in display order [t_{j-1}..t_i]."""
    return _chain(params, d, i, j, list(ts)[::-1], rfun, descending=True, reverse=False,
                  scaled=scaled)


def chain_desc_rev(params: AlgebraParams, d: int, j: int, i: int, ts, rfun=None,
                   scaled: bool = False):
    """Reversed descending chain from j down to i, ts in display order [t_{j-1}..t_i]."""
    return _chain(params, d, i, j, list(ts)[::-1], rfun, descending=True, reverse=True,
                  scaled=scaled)


def _chain(params, d, i, j, ts, rfun, descending, reverse, scaled=False):
    """Core chain builder; ts is always in ascending index order [t_i..t_{j-1}]."""
    _check_dim(params.n, d)
    if not 1 <= i <= j <= d:
        raise ValueError(f"chain endpoints ({i}, {j}) out of range for degree {d}")
    m = j - i
    ts = list(ts)
    if len(ts) != m:
        raise ValueError(f"chain from {i} to {j} needs {m} arguments, got {len(ts)}")
    dim = params.n ** d
    if m == 0:
        return ScaledOp.identity(dim) if scaled else np.eye(dim, dtype=complex)
    rfun = rfun or _default_rfun(params)
    # prefix[q] = t_i + ... + t_{i+q-1}; suffix[q] = t_{i+q} + ... + t_{j-1}
    prefix = list(itertools.accumulate(ts))
    total = prefix[-1]
    factors = []
    if not descending and not reverse:
        # R(Sum(i,j-1))_{i,i+1} ... R(t_{j-1})_{j-1,j}
        for q in range(m):
            arg = total - (prefix[q - 1] if q > 0 else 0)
            factors.append((arg, i + q))
    elif not descending and reverse:
        # R(t_i)_{i,i+1} R(Sum(i,i+1))_{i+1,i+2} ... R(Sum(i,j-1))_{j-1,j}
        for q in range(m):
            factors.append((prefix[q], i + q))
    elif descending and not reverse:
        # R(Sum(i,j-1))_{j-1,j} ... R(Sum(i,q))_{q,q+1} ... R(t_i)_{i,i+1}
        for q in range(m - 1, -1, -1):
            factors.append((prefix[q], i + q))
    else:
        # R(t_{j-1})_{j-1,j} R(Sum(j-2,j-1))_{j-2,j-1} ... R(Sum(i,j-1))_{i,i+1}
        for q in range(m - 1, -1, -1):
            arg = total - (prefix[q - 1] if q > 0 else 0)
            factors.append((arg, i + q))
    if scaled:
        out = ScaledOp.identity(dim)
        for arg, pos in factors:
            fac = ScaledOp.wrap(rfun(arg))
            out = out @ ScaledOp(embed_pair(fac.mat, pos, params.n, d), fac.log_scale)
        return out
    out = np.eye(dim, dtype=complex)
    for arg, pos in factors:
        out = out @ embed_pair(rfun(arg), pos, params.n, d)
    return out


def t_op(params: AlgebraParams, d: int, zs, rfun=None, scaled: bool = False):
    """Cumulative chain product T_d(z_1, ..., z_{d-1}).

    T_d is the left-to-right product over m = 2..d of the descending chain
    from position m down to 1 with display arguments (z_1, ..., z_{m-1}).
    T_0 and T_1 are the identity.
    """
    _check_dim(params.n, d)
    zs = list(zs)
    if len(zs) != max(d - 1, 0):
        raise ValueError(f"T_{d} needs {max(d - 1, 0)} arguments, got {len(zs)}")
    dim = params.n ** d
    out = ScaledOp.identity(dim) if scaled else np.eye(dim, dtype=complex)
    if d <= 1:
        return out
    rfun = rfun or _default_rfun(params)
    for m in range(2, d + 1):
        out = out @ chain_desc(params, d, m, 1, zs[: m - 1], rfun, scaled=scaled)
    return out


def f_op(params: AlgebraParams, d: int, z, rfun=None, scaled: bool = False):
    """F_d(z) = T_d(z, ..., z)."""
    return t_op(params, d, [z] * max(d - 1, 0), rfun, scaled=scaled)


def m_op(params: AlgebraParams, a: int, b: int, z, xs=None, ys=None, rfun=None,
         validate: bool = False, scaled: bool = False):
    """Rectangular a-by-b array product M_{a,b}(z; x_1..x_{a-1}; y_1..y_{b-1}).

    Entry (row, col) of the array (rows top to bottom, columns left to
    right) is R(z + x_1+..+x_row + y_1+..+y_col) acting at positions
    (a - row + col, a - row + col + 1); the operator is the product of the
    rows top to bottom, each row multiplied left to right.  The same value
    arises as the product of the columns left to right, each column
    multiplied top to bottom; ``validate=True`` checks the two assemblies
    agree.  M with a = 0 or b = 0 is the identity on V^{(x)(a+b)}.

    When xs/ys are omitted every increment defaults to z itself (the
    one-argument shorthand M_{a,b}(z)).
    """
    d = a + b
    _check_dim(params.n, d)
    xs = list(xs) if xs is not None else [z] * max(a - 1, 0)
    ys = list(ys) if ys is not None else [z] * max(b - 1, 0)
    if len(xs) != max(a - 1, 0) or len(ys) != max(b - 1, 0):
        raise ValueError("M_{a,b} needs a-1 row increments and b-1 column increments")
    dim = params.n ** d
    if a == 0 or b == 0:
        return ScaledOp.identity(dim) if scaled else np.eye(dim, dtype=complex)
    rfun = rfun or _default_rfun(params)
    # row product: row idx is the reversed ascending chain from a-idx to a+b-idx
    out = ScaledOp.identity(dim) if scaled else np.eye(dim, dtype=complex)
    for idx in range(a):
        base = z + sum(xs[:idx])
        out = out @ chain_asc_rev(params, d, a - idx, a + b - idx, [base] + ys, rfun,
                                  scaled=scaled)
    if validate:
        alt = ScaledOp.identity(dim) if scaled else np.eye(dim, dtype=complex)
        # column product: column idx is the reversed descending chain a+1+idx -> 1+idx
        for idx in range(b):
            base = z + sum(ys[:idx])
            alt = alt @ chain_desc_rev(params, d, a + 1 + idx, 1 + idx, [base] + xs, rfun,
                                       scaled=scaled)
        if scaled:
            resid = scaled_residual(out, alt)
        else:
            scale = max(np.max(np.abs(out)), 1e-300)
            resid = np.max(np.abs(out - alt)) / scale
        if resid > 1e-8:
            raise AssertionError("row-wise and column-wise assemblies of M_{a,b} disagree")
    return out


ZERO_OPERATOR_TOL = 1e-10


def scaled_rank(op: ScaledOp, policy: RankPolicy | None = None,
                zero_tol: float = ZERO_OPERATOR_TOL):
    """Certified (rank, gap) of a scaled chain product.

    Factors enter chains at unit max-abs, so a product whose matrix part
    has cancelled below ``zero_tol`` is the zero operator; an SVD of such
    pure cancellation noise would otherwise report a meaningless rank.
    """
    from .linalg import svd_rank

    if op.max_abs() < zero_tol:
        return 0, math.inf
    return svd_rank(op.mat, policy)


def r_at_relation_point(params: AlgebraParams, sign: int = 1) -> np.ndarray:
    """R evaluated at sign*tau, switching to the exact torsion limit when
    tau lies in (1/n)-lattice torsion."""
    if params.tau_is_torsion():
        n, eta = params.n, params.eta
        zeta = complex(params.tau)
        # decompose n*tau = aq + bq*eta with integers
        bq = round(n * zeta.imag / complex(eta).imag)
        aq = round((n * zeta - bq * eta).real)
        return r_plus_limit(params, HalfPeriodPoint(aq, bq), sign)
    return r_matrix(params, sign * params.tau)


def relation_pair_image(params: AlgebraParams, policy: RankPolicy | None = None) -> Subspace:
    """Image of R(tau) on V^{(x)2}: the quadratic relation space."""
    return image(r_at_relation_point(params, 1), policy)


def relation_space(params: AlgebraParams, d: int,
                   policy: RankPolicy | None = None) -> Subspace:
    """Degree-d relation space: sum over positions of the embedded image of
    R(tau), i.e. Sum_i V^{(x)(i-1)} (x) im R(tau) (x) V^{(x)(d-i-1)}."""
    _check_dim(params.n, d)
    if d < 2:
        raise ValueError("relation space needs degree at least 2")
    policy = policy or params.ranks
    n = params.n
    Rt = r_at_relation_point(params, 1)
    pair = image(Rt, policy)
    spaces = []
    for pos in range(1, d):
        emb = embed_pair(pair.basis @ pair.basis.conj().T, pos, n, d)
        spaces.append(image(emb, policy))
    return subspace_sum(spaces, policy)


def embedded_kernel_intersection(params: AlgebraParams, d: int, sign: int,
                                 policy: RankPolicy | None = None) -> Subspace:
    """Intersection over positions of V^{(x)s} (x) ker R(sign*tau) (x) V^{(x)t}."""
    from .linalg import kernel

    _check_dim(params.n, d)
    if d < 2:
        raise ValueError("kernel intersection needs degree at least 2")
    policy = policy or params.ranks
    n = params.n
    Rm = r_at_relation_point(params, sign)
    ker_pair = kernel(Rm, policy)
    proj = ker_pair.basis @ ker_pair.basis.conj().T
    spaces = [image(embed_pair(proj, pos, n, d), policy) for pos in range(1, d)]
    return subspace_intersect(spaces, policy)


def embedded_image_sum(params: AlgebraParams, d: int, sign: int,
                       policy: RankPolicy | None = None) -> Subspace:
    """Sum over positions of V^{(x)s} (x) im R(sign*tau) (x) V^{(x)t}."""
    _check_dim(params.n, d)
    if d < 2:
        raise ValueError("image sum needs degree at least 2")
    policy = policy or params.ranks
    n = params.n
    Rm = r_at_relation_point(params, sign)
    pair = image(Rm, policy)
    proj = pair.basis @ pair.basis.conj().T
    spaces = [image(embed_pair(proj, pos, n, d), policy) for pos in range(1, d)]
    return subspace_sum(spaces, policy)
