"""Numerical laboratory for the elliptic R-matrix family and the graded
operator calculus built on it: theta-function kernels, the R-matrix with
its transformation laws, tensor-power chain operators, rank/dimension
verifiers, an exact classical oracle, and a CLI (``ellr``) that runs the
whole verification suite."""

from .theta import (
    e_fn,
    LatticeParams,
    SeriesPolicy,
    ThetaContext,
    theta1,
    theta_alpha,
    jacobi_theta,
    theta_char,
    factor_constant,
    nearest_lattice_distance,
)
from .linalg import (
    AmbiguousRankError,
    RankPolicy,
    Subspace,
    svd_rank,
    kernel,
    image,
    subspace_sum,
    subspace_intersect,
    subspace_equal,
)
from .rmatrix import (
    DEFAULT_ETA,
    AlgebraParams,
    HalfPeriodPoint,
    make_params,
    basis_ops,
    r_matrix,
    sym_op,
    r_plus_limit,
    weight_op,
    weight_op_k,
    det_closed_form,
)
from .tensorops import (
    ScaledOp,
    scaled_residual,
    scaled_rank,
    embed_pair,
    embed_single,
    perm_op,
    symmetrizer,
    antisymmetrizer,
    t_op,
    f_op,
    m_op,
    relation_space,
)
from .classical import (
    classical_w_dim,
    classical_dims,
    classical_hilbert,
    inclusion_exclusion_check,
    shuffle_identity_check,
)
from .verifiers import CheckResult, Report, run_suite, ALL_CHECKS, VERSION

__version__ = VERSION
