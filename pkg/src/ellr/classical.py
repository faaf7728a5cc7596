"""Exact-arithmetic classical oracle.

Computes, over arbitrary-precision integers, every "classical" (undeformed)
dimension the numerical pipeline is compared against: spans and
intersections of the subspaces

    L_i   = V^{(x)(i-1)} (x) Alt2(V) (x) V^{(x)(d-i-1)}   (1 <= i <= d-1)
    Sig_s = L_1 + ... + L_s
    I_t   = L_{d-t} ^ ... ^ L_{d-1}          (^ = intersection)

inside V^{(x)d} with V = C^n, plus the symmetric/exterior Hilbert
dimensions and the group-algebra shuffle decomposition.  No floating point
enters any result.

Conventions: an empty sum of subspaces (Sig_0) and an empty intersection
(I_0) both denote the full ambient space, so the lattice dimension
dim(Sig_ell ^ I_r) with ell + r = d - 1 reduces to dim I_{d-1} at ell = 0
and to dim Sig_{d-1} at r = 0.  Basis ordering is row-major multi-index.
"""

from __future__ import annotations

import itertools
from math import comb, factorial

from .linalg import exact_rank, exact_row_space_intersection

MAX_CLASSICAL_DEGREE = 5
MAX_SHUFFLE_SIZE = 6


def _check(n: int, d: int):
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= d <= MAX_CLASSICAL_DEGREE:
        raise ValueError(f"degree {d} outside supported range 0..{MAX_CLASSICAL_DEGREE}")


def _multi_indices(n: int, d: int):
    return itertools.product(range(n), repeat=d)


def _flat(idx, n: int) -> int:
    out = 0
    for v in idx:
        out = out * n + v
    return out


def lambda_rows(n: int, d: int, pos: int):
    """Integer row span of L_pos: alternating pairs at slots (pos, pos+1).

    Rows are x_{..} (x) (x_i (x) x_j - x_j (x) x_i) (x) x_{..} for i < j.
    """
    _check(n, d)
    if not 1 <= pos <= d - 1:
        raise ValueError(f"pair position {pos} out of range for degree {d}")
    dim = n ** d
    rows = []
    for left in _multi_indices(n, pos - 1):
        for right in _multi_indices(n, d - pos - 1):
            for i in range(n):
                for j in range(i + 1, n):
                    row = [0] * dim
                    row[_flat(left + (i, j) + right, n)] = 1
                    row[_flat(left + (j, i) + right, n)] = -1
                    rows.append(row)
    return rows


def sigma_rows(n: int, d: int, s: int):
    """Integer row span of Sig_s = L_1 + ... + L_s; s = 0 gives the ambient space."""
    _check(n, d)
    if not 0 <= s <= d - 1:
        raise ValueError(f"sum index {s} out of range for degree {d}")
    if s == 0:
        return _ambient_rows(n ** d)
    rows = []
    for pos in range(1, s + 1):
        rows.extend(lambda_rows(n, d, pos))
    return rows


def i_rows(n: int, d: int, t: int):
    """Integer row basis of I_t = L_{d-t} ^ ... ^ L_{d-1}; t = 0 gives the ambient space."""
    _check(n, d)
    if not 0 <= t <= d - 1:
        raise ValueError(f"intersection index {t} out of range for degree {d}")
    dim = n ** d
    if t == 0:
        return _ambient_rows(dim)
    rows = lambda_rows(n, d, d - t)
    for pos in range(d - t + 1, d):
        rows = exact_row_space_intersection(rows, lambda_rows(n, d, pos), dim)
    return rows


def _ambient_rows(dim: int):
    return [[1 if c == r else 0 for c in range(dim)] for r in range(dim)]


def classical_subspaces(n: int, d: int, which: str, index: int):
    """Dispatcher for the classical integer spanning sets.

    which = "pair" -> L_index; "sum" -> Sig_index; "cap" -> I_index.
    """
    if which == "pair":
        return lambda_rows(n, d, index)
    if which == "sum":
        return sigma_rows(n, d, index)
    if which == "cap":
        return i_rows(n, d, index)
    raise ValueError(f"unknown subspace family {which!r}")


def classical_w_dim(n: int, d: int, ell: int, r: int) -> int:
    """Exact dim(Sig_ell ^ I_r) for ell + r = d - 1."""
    _check(n, d)
    if ell + r != d - 1:
        raise ValueError("lattice dimension requires ell + r = d - 1")
    dim = n ** d
    inter = exact_row_space_intersection(sigma_rows(n, d, ell), i_rows(n, d, r), dim)
    return exact_rank(inter)


def inclusion_exclusion_check(n: int, d: int, ell: int) -> dict:
    """Exact verification of the three-term intersection identity

        dim((X + Y) ^ Z) = dim(X ^ Z) + dim(Y ^ Z) - dim(X ^ Y ^ Z)

    with X = L_1 + ... + L_{ell-1}, Y = L_{ell,ell+1}, and
    Z = L_{ell+1} ^ ... ^ L_{d-1}; requires 1 <= ell <= d-1.  Returns the
    four dimensions; the identity itself encodes the distributivity of the
    classical subspace lattice at this corner.
    """
    _check(n, d)
    if not 1 <= ell <= d - 1:
        raise ValueError("inclusion-exclusion check needs 1 <= ell <= d-1")
    dim = n ** d
    X = sigma_rows(n, d, ell - 1) if ell > 1 else []
    Y = lambda_rows(n, d, ell)
    Z = i_rows(n, d, d - 1 - ell)
    XZ = exact_row_space_intersection(X, Z, dim) if X else []
    YZ = exact_row_space_intersection(Y, Z, dim)
    XYZ = exact_row_space_intersection(X, YZ, dim) if X else []
    lhs = classical_w_dim(n, d, ell, d - 1 - ell)
    rhs = exact_rank(XZ) + exact_rank(YZ) - exact_rank(XYZ)
    return {
        "lhs": lhs,
        "dim_x_cap_z": exact_rank(XZ),
        "dim_y_cap_z": exact_rank(YZ),
        "dim_x_cap_y_cap_z": exact_rank(XYZ),
        "rhs": rhs,
        "equal": lhs == rhs,
    }


def _perm_rows(n: int, d: int, signed: bool):
    """Integer matrix of the (anti)symmetrizer Sum_sigma (sgn) sigma on V^{(x)d}."""
    dim = n ** d
    rows = [[0] * dim for _ in range(dim)]
    for sigma in itertools.permutations(range(d)):
        sign = 1
        if signed:
            inv = sum(
                1
                for a in range(d)
                for b in range(a + 1, d)
                if sigma[a] > sigma[b]
            )
            sign = -1 if inv & 1 else 1
        inv_sigma = [0] * d
        for s, t in enumerate(sigma):
            inv_sigma[t] = s
        for idx in _multi_indices(n, d):
            out = tuple(idx[inv_sigma[slot]] for slot in range(d))
            rows[_flat(out, n)][_flat(idx, n)] += sign
    return rows


def classical_hilbert(n: int, d: int, cross_check: bool = True) -> dict:
    """Dimensions of degree-d symmetric and exterior powers of C^n.

    Returns {"poly_dim": C(n+d-1,d), "ext_dim": C(n,d)}; with cross_check
    the binomials are verified against the exact rank of the integer
    symmetrizer and antisymmetrizer matrices.
    """
    _check(n, d)
    poly_dim = comb(n + d - 1, d)
    ext_dim = comb(n, d)
    if cross_check and d >= 1:
        sym_rank = exact_rank(_perm_rows(n, d, signed=False))
        anti_rank = exact_rank(_perm_rows(n, d, signed=True))
        if sym_rank != poly_dim or anti_rank != ext_dim:
            raise AssertionError(
                f"(anti)symmetrizer ranks ({sym_rank}, {anti_rank}) disagree with "
                f"binomials ({poly_dim}, {ext_dim})"
            )
    return {"poly_dim": poly_dim, "ext_dim": ext_dim}


def _compose(p, q):
    """(p o q)(i) = p(q(i)); permutations in one-line notation over 0..m-1."""
    return tuple(p[q[i]] for i in range(len(p)))


def shuffle_identity_check(a: int, b: int) -> bool:
    """Exact group-algebra identity: every permutation of a+b letters
    factors uniquely as omega o alpha o beta with

      omega  an (a,b)-shuffle (increasing on the first a and last b slots),
      alpha  fixing every slot past a,
      beta   fixing every slot up to a.

    Verified by brute-force enumeration; requires a + b <= 6.
    """
    if a < 0 or b < 0 or a + b > MAX_SHUFFLE_SIZE:
        raise ValueError(f"shuffle check supports 0 <= a+b <= {MAX_SHUFFLE_SIZE}")
    m = a + b
    perms = list(itertools.permutations(range(m)))
    shuffles = [
        w
        for w in perms
        if all(w[i] < w[i + 1] for i in range(a - 1))
        and all(w[i] < w[i + 1] for i in range(a, m - 1))
    ]
    left = [p for p in perms if all(p[i] == i for i in range(a, m))]
    right = [p for p in perms if all(p[i] == i for i in range(a))]
    counts = {p: 0 for p in perms}
    for w in shuffles:
        for al in left:
            for be in right:
                counts[_compose(w, _compose(al, be))] += 1
    return all(c == 1 for c in counts.values())


def classical_dims(n: int, d: int) -> dict:
    """Full classical dimension table for degree d.

    Returns {"w": {ell: dim(Sig_ell ^ I_{d-1-ell})}, "sigma": {...},
    "cap": {...}} with the boundary conventions above.
    """
    _check(n, d)
    w = {ell: classical_w_dim(n, d, ell, d - 1 - ell) for ell in range(d)}
    sig = {s: exact_rank(sigma_rows(n, d, s)) for s in range(d)}
    cap = {t: exact_rank(i_rows(n, d, t)) for t in range(d)}
    return {"w": w, "sigma": sig, "cap": cap}
