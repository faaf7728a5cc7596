"""Theta function kernel.

Evaluates the order-1 theta function theta(z), the order-n family
theta_alpha(z) (alpha in Z_n), the Jacobi theta function with
characteristics, and the torsion-indexed weight functions w_{(a,b)}(z), all from
truncated exponential series.  Arguments are reduced toward the fundamental
parallelogram with the exact quasi-periodicity laws before summing, so the
series always converges fast and never overflows for large |Im z|.

All series use a symmetric index window that grows until the terms drop
below ``rel_tol`` times the largest term seen so far.

Setting ``SeriesPolicy.dps`` switches the scalar kernel to mpmath arithmetic
with that many significant digits (used for ill-conditioned determinant
checks); otherwise everything is double-precision complex.
"""

from __future__ import annotations

import cmath
import threading
from dataclasses import dataclass, field

import mpmath

TWO_PI_I = 2j * cmath.pi


class TruncationError(RuntimeError):
    """Series failed to converge within the policy's index window."""


class SingularParameterError(ValueError):
    """A parameter lies on (or too close to) a singular locus."""


def e_fn(z):
    """e(z) = exp(2*pi*i*z)."""
    if isinstance(z, (mpmath.mpf, mpmath.mpc)):
        return mpmath.e ** (2j * mpmath.pi * z)
    return cmath.exp(TWO_PI_I * complex(z))


@dataclass(frozen=True)
class LatticeParams:
    """The lattice Z + Z*eta with Im(eta) > 0."""

    eta: complex

    def __post_init__(self):
        if not complex(self.eta).imag > 0:
            raise ValueError("lattice parameter must have positive imaginary part")


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation bounds for all theta series."""

    rel_tol: float = 1e-15
    max_index: int = 200
    dps: int | None = None  # mpmath significant digits; None = double precision

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_index < 10:
            raise ValueError("max_index must be at least 10")


@dataclass
class ThetaContext:
    """Bundles n, the lattice, and the series policy; caches the factor constant."""

    n: int
    lattice: LatticeParams
    policy: SeriesPolicy = field(default_factory=SeriesPolicy)
    _factor_c: complex | None = field(default=None, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")

    @property
    def eta(self):
        return self.lattice.eta


def _wrap(z, policy: SeriesPolicy):
    """Coerce z to the arithmetic type selected by the policy."""
    if policy.dps is not None:
        with mpmath.workdps(policy.dps):
            return mpmath.mpc(z)
    return complex(z)


def _exp2pii(z, policy: SeriesPolicy):
    if policy.dps is not None:
        with mpmath.workdps(policy.dps):
            return mpmath.e ** (2j * mpmath.pi * mpmath.mpc(z))
    return cmath.exp(TWO_PI_I * z)


def _reduce(z, eta, policy):
    """Write z = z0 + s*eta + t with s, t integers and z0 near the base cell.

    Returns (z0, s, t).
    """
    zc, ec = complex(z), complex(eta)
    s = round(zc.imag / ec.imag)
    t = round((zc - s * ec).real)
    z0 = _wrap(z, policy) - s * _wrap(eta, policy) - t
    return z0, s, t


def _sym_series(term, policy: SeriesPolicy):
    """Sum term(m) over a symmetric window m in [-M, M] grown adaptively."""
    total = term(0)
    biggest = abs(total)
    quiet = 0
    for m in range(1, policy.max_index + 1):
        tp, tm = term(m), term(-m)
        total += tp + tm
        mag = max(abs(tp), abs(tm))
        biggest = max(biggest, mag, abs(total))
        if mag <= policy.rel_tol * max(biggest, 1e-300):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
    raise TruncationError("theta series did not converge within max_index terms")


def theta1(z, ctx: ThetaContext):
    """Order-1 theta function theta(z) = sum_m (-1)^m e(mz + m(m-1)eta/2).

    Satisfies theta(z+1) = theta(z) and theta(z+eta) = -e(-z) theta(z);
    vanishes exactly on the lattice.
    """
    policy, eta = ctx.policy, ctx.eta
    z0, s, t = _reduce(z, eta, policy)
    etaw = _wrap(eta, policy)

    def term(m):
        return (-1) ** (m & 1) * _exp2pii(m * z0 + 0.5 * m * (m - 1) * etaw, policy)

    base = _sym_series(term, policy)
    # theta(z0 + s*eta) = (-1)^s e(-s z0 - s(s-1) eta / 2) theta(z0)
    factor = (-1) ** (s & 1) * _exp2pii(-s * z0 - 0.5 * s * (s - 1) * etaw, policy)
    return factor * base


def theta_alpha(alpha: int, z, ctx: ThetaContext):
    """theta_alpha(z), alpha in Z_n: order-n theta function.

    theta_alpha(z) = e(alpha z + alpha/2n + alpha(alpha-n) eta/2n)
                     * prod_{m=0}^{n-1} theta1(z + m/n + alpha eta/n).

    The family is periodic in alpha with period n; alpha is reduced mod n.
    Quasi-periodicity: theta_alpha(z + 1/n) = e(alpha/n) theta_alpha(z).
    Zero locus: -(alpha/n)eta + (1/n)Z + Z eta.
    """
    n = ctx.n
    alpha %= n
    policy = ctx.policy
    zw = _wrap(z, policy)
    etaw = _wrap(ctx.eta, policy)
    pref = _exp2pii(
        alpha * zw + alpha / (2 * n) + alpha * (alpha - n) * etaw / (2 * n), policy
    )
    prod = pref
    for m in range(n):
        prod *= theta1(zw + m / n + alpha * etaw / n, ctx)
    return prod


def jacobi_theta(z, eta, policy: SeriesPolicy):
    """Jacobi theta: sum_m e(mz + m^2 eta / 2), with argument reduction."""
    z0, s, t = _reduce(z, eta, policy)
    etaw = _wrap(eta, policy)

    def term(m):
        return _exp2pii(m * z0 + 0.5 * m * m * etaw, policy)

    base = _sym_series(term, policy)
    # theta(z0 + s*eta + t) = e(-s z0 - s^2 eta / 2) theta(z0)
    return _exp2pii(-s * z0 - 0.5 * s * s * etaw, policy) * base


def theta_char(a: float, b: float, z, eta, policy: SeriesPolicy | None = None):
    """Theta function with characteristics a, b:

    sum_m e((a+m)(z+b) + (a+m)^2 eta / 2)
      = e(a(z+b) + a^2 eta / 2) * jacobi_theta(z + a*eta + b).

    Periodicity: [a+1; b] = [a; b] and [a; b+1] = e(a) [a; b].
    Vanishes iff z in (1+eta)/2 - (a*eta + b) + Lambda.
    """
    if policy is None:
        policy = SeriesPolicy()
    # shift a into [-1/2, 1/2) using the exact a -> a+1 periodicity
    sa = round(a)
    a = a - sa
    zw = _wrap(z, policy)
    etaw = _wrap(eta, policy)
    pref = _exp2pii(a * (zw + b) + 0.5 * a * a * etaw, policy)
    return pref * jacobi_theta(zw + a * etaw + b, eta, policy)


def theta_char_shift_check(a, b, s: int, t: int, z, eta, policy=None) -> float:
    """Relative residual of
    theta_char(z + s*eta + t) = e(a t - s (z+b) - s^2 eta / 2) * theta_char(z).
    """
    if policy is None:
        policy = SeriesPolicy()
    lhs = theta_char(a, b, z + s * eta + t, eta, policy)
    rhs = e_fn(a * t - s * (z + b) - 0.5 * s * s * eta) * theta_char(a, b, z, eta, policy)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


_FACTOR_SAMPLES = [(0, 0.3 + 0.2j), (1, 0.7 + 0.1j), (0, 0.13 - 0.08j), (1, -0.41 + 0.27j)]


def factor_constant(ctx: ThetaContext):
    """The constant c with
    theta_char(alpha/n + 1/2, 1/2, z | n*eta) = c^{-1} e(-z/2) theta_alpha(z/n).

    Sampled at a generic point (resampling if degenerate) and cached.
    """
    if ctx._factor_c is not None:
        return ctx._factor_c
    with ctx._lock:
        if ctx._factor_c is not None:
            return ctx._factor_c
        n, eta, policy = ctx.n, ctx.eta, ctx.policy
        for alpha, z in _FACTOR_SAMPLES:
            denom = theta_char(alpha / n + 0.5, 0.5, z, n * eta, policy)
            numer = e_fn(-0.5 * z) * theta_alpha(alpha, z / n, ctx)
            if abs(denom) > 1e-8 and abs(numer) > 1e-8:
                ctx._factor_c = numer / denom
                return ctx._factor_c
        raise SingularParameterError("all factor-constant sample points were degenerate")


def nearest_lattice_distance(z, eta) -> float:
    """Distance from z to the nearest point of Z + Z*eta."""
    zc, ec = complex(z), complex(eta)
    b = zc.imag / ec.imag
    a = (zc - b * ec).real
    best = min(
        abs((a - ra) + (b - rb) * ec + 0j)
        for ra in (int(a // 1), int(a // 1) + 1)
        for rb in (int(b // 1), int(b // 1) + 1)
    )
    # the rounded corner is among the four floor/ceil combinations
    return best


def w_fn(a: int, b: int, z, tau, ctx: ThetaContext):
    """Torsion-indexed weight w_{(a,b)}(z) = theta_char[a/n; b/n](z + xi) / theta_char[a/n; b/n](xi)
    with xi = tau + (1+eta)/2.  Depends on (a, b) only mod n; w_{(a,b)}(0) = 1.
    """
    n, eta, policy = ctx.n, ctx.eta, ctx.policy
    xi = tau + 0.5 * (1 + eta)
    denom = theta_char(a / n, b / n, xi, eta, policy)
    if abs(denom) < 1e-12:
        raise SingularParameterError(
            "w_{(a,b)} denominator vanishes: tau lies on the singular locus"
        )
    return theta_char(a / n, b / n, z + xi, eta, policy) / denom
