"""Stabilizing charges: the values that make a given convex configuration
the global minimum of the effective potential.

For a convex quadrilateral with unit charges on one diagonal pair, a single
charge t on the other diagonal stabilizes the shape; it comes from setting
the derivative of the potential along the diagonal curve D(x, y) = 0 to
zero.  For a convex pentagon with fixed positive charges q1, q2, q4 and
controlling charges t (vertex 2) and s (vertex 4), stationarity in the
local coordinates (b2, b4) reduces to one quadratic in s whose coefficient
product A*C is negative on strictly convex configurations, so exactly one
positive root exists; t then follows linearly.  The general Lagrange
rank-deficiency system is provided as an independent verifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryConfiguration,
    BoundarySlicePoint,
    CoulinkError,
    NonPositiveCharge,
    NotConvex,
    NotRealizable,
    NumericalConditioning,
)
from .geometry import cm_entry_gradient
from .moduli import (
    Configuration,
    Linkage,
    cm_constraints,
    convexity_status,
    diagonals,
    quad_constraint_matrix,
    quad_psi,
)
from .potential import (
    PentagonFrame,
    charge_products,
    stationarity_residual,
)

__all__ = [
    "JacobianEntries",
    "QuadraticCoeffs",
    "StabilizingSolution",
    "RankSystem",
    "pentagon_jacobian",
    "stabilize_pentagon",
    "stabilize_quad",
    "rank_system",
    "bezout_bound",
    "mixed_sign_noncritical",
]

CONDITION_FLOOR = 1e-14  # refuse to divide by a smaller quadratic coefficient
CRITICAL_TOL = 1e-8      # stationarity residual accepted as "critical", normalized units


def _require_strict(config: Configuration):
    status = convexity_status(config.vertices)
    if status == "boundary":
        raise BoundaryConfiguration("configuration has an aligned vertex triple")
    if status != "strict":
        raise NotConvex("configuration is not strictly convex")


def _normalized(config: Configuration) -> Configuration:
    return config.scaled(1.0 / float(np.max(config.sidelengths())))


@dataclass(frozen=True)
class JacobianEntries:
    """Partials of the dependent diagonals in the local coordinates (b2, b4).

    alpha1 = db4'/db4 style entries follow the fixed naming:
    alpha = d|V3 V0| (b[4]), beta = d|V1 V3| (b[2]), gamma = d|V4 V1| (b[0]);
    subscript 1 differentiates in b4 = |V2 V4|, subscript 2 in b2 = |V0 V2|.
    """

    alpha1: float
    beta1: float
    gamma1: float
    alpha2: float
    beta2: float
    gamma2: float


def pentagon_jacobian(config: Configuration) -> JacobianEntries:
    """Six diagonal partials at a strictly convex pentagon.

    Derived from the signed-area form of the implicit derivatives of the
    Cayley-Menger constraints, converted from squared to plain lengths.
    """
    if config.n != 5:
        raise NotRealizable("pentagon_jacobian requires a pentagon")
    _require_strict(config)
    xs = diagonals(config)
    frame = PentagonFrame(tuple(config.sidelengths()), float(xs[1]), float(xs[3]))
    try:
        fp = frame.first_partials()
    except BoundarySlicePoint as exc:
        raise BoundaryConfiguration(str(exc)) from exc
    b = frame.bs
    return JacobianEntries(
        alpha1=fp[4, 1] * b[3] / b[4],
        beta1=fp[2, 1] * b[3] / b[2],
        gamma1=fp[0, 1] * b[3] / b[0],
        alpha2=fp[4, 0] * b[1] / b[4],
        beta2=fp[2, 0] * b[1] / b[2],
        gamma2=fp[0, 0] * b[1] / b[0],
    )


@dataclass(frozen=True)
class QuadraticCoeffs:
    """Coefficients of A + B s + C s**2 = 0 for the controlling charge s."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class StabilizingSolution:
    """Positive controlling charges and the achieved stationarity residual."""

    s: float
    t: float
    residual: float
    coeffs: QuadraticCoeffs


def stabilizer_quadratic(config: Configuration, q1: float, q2: float, q4: float) -> tuple[
    QuadraticCoeffs, JacobianEntries, np.ndarray
]:
    """Quadratic coefficients for s, plus the Jacobian and diagonal lengths used."""
    jac = pentagon_jacobian(config)
    b = np.sqrt(diagonals(config))
    a_co = q1 * q4 * jac.alpha1 / b[4] ** 2 + q2 * q4 * jac.beta1 / b[2] ** 2
    b_co = q2 * jac.gamma1 / b[0] ** 2 - (b[1] ** 2 / b[3] ** 2) * (
        q4 * jac.alpha2 / b[4] ** 2 + q2 * q4 * jac.beta2 / (q1 * b[2] ** 2)
    )
    c_co = -(b[1] ** 2) * jac.gamma2 * q2 / (q1 * b[3] ** 2 * b[0] ** 2)
    return QuadraticCoeffs(a=a_co, b=b_co, c=c_co), jac, b


def stabilize_pentagon(
    config: Configuration, q1: float, q2: float, q4: float
) -> StabilizingSolution:
    """The unique positive controlling charges (s, t) stabilizing ``config``.

    s is the positive root of the stationarity quadratic (the product of its
    roots is negative on strictly convex configurations, so exactly one is
    positive); t follows from the b4-stationarity equation, linear in t once
    s is known.  The reported residual is the shape-gradient norm of the
    full five-charge vector at the configuration, computed at unit scale.

    Controlling charges sit at vertices 2 and 4, one pair of non-adjacent
    vertices; any other non-adjacent placement is this one after cyclically
    relabeling the linkage.  Adjacent controlling charges cannot reach every
    convex shape and are not supported.
    """
    if min(q1, q2, q4) <= 0:
        raise NonPositiveCharge("fixed charges q1, q2, q4 must be positive")
    if config.n != 5:
        raise NotRealizable("stabilize_pentagon requires a pentagon")
    cn = _normalized(config)
    coeffs, jac, b = stabilizer_quadratic(cn, q1, q2, q4)
    a_co, b_co, c_co = coeffs.a, coeffs.b, coeffs.c
    if abs(c_co) < CONDITION_FLOOR:
        raise NumericalConditioning(
            f"quadratic leading coefficient {c_co:.3e} is below the conditioning floor"
        )
    disc = b_co * b_co - 4.0 * a_co * c_co
    if disc < 0.0:
        raise CoulinkError("stationarity quadratic has no real root; configuration suspect")
    # numerically stable root pair, then pick the positive one
    if b_co >= 0.0:
        qq = -0.5 * (b_co + math.sqrt(disc))
    else:
        qq = -0.5 * (b_co - math.sqrt(disc))
    roots = []
    if c_co != 0.0:
        roots.append(qq / c_co)
    if qq != 0.0:
        roots.append(a_co / qq)
    positive = [r for r in roots if r > 0.0]
    if len(positive) != 1:
        raise CoulinkError(
            f"expected exactly one positive root, got {roots} (A={a_co}, B={b_co}, C={c_co})"
        )
    s = positive[0]
    t = -(b[3] ** 2) * (a_co + s * q2 * jac.gamma1 / b[0] ** 2) / s
    if t <= 0.0:
        raise CoulinkError(f"recovered non-positive t={t}; configuration suspect")
    residual = stationarity_residual(cn, (q1, q2, t, q4, s))
    return StabilizingSolution(s=float(s), t=float(t), residual=float(residual), coeffs=coeffs)


def stabilize_quad(linkage: Linkage, config: Configuration) -> float:
    """The unique charge t with E = 1/d13 + t/d24 critical at ``config``.

    Setting dE = 0 along the diagonal curve D(x, y) = 0 gives
    t = (y/x)^(3/2) * D_y / D_x at (x, y) = (d13**2, d24**2); both curve
    partials are nonzero with equal signs on strictly convex
    quadrilaterals, so t is positive.
    """
    if linkage.n != 4 or config.n != 4:
        raise NotRealizable("stabilize_quad requires a 4-bar linkage")
    if np.max(np.abs(config.sidelengths() - np.asarray(linkage.sides))) > 1e-8 * linkage.scale:
        raise NotRealizable("configuration does not realize the given linkage")
    _require_strict(config)
    cn = _normalized(config)
    x, y = quad_psi(cn)
    m = quad_constraint_matrix(tuple(cn.sidelengths()), x, y)
    dx = cm_entry_gradient(m, 0, 2)
    dy = cm_entry_gradient(m, 1, 3)
    if abs(dx) < CONDITION_FLOOR:
        raise NumericalConditioning(f"curve partial D_x={dx:.3e} too small to divide by")
    t = (y / x) ** 1.5 * dy / dx
    if t <= 0.0:
        raise CoulinkError(f"derived non-positive t={t}; configuration suspect")
    return float(t)


@dataclass(frozen=True)
class RankSystem:
    """Lagrange rank test: potential gradient stacked on constraint gradients.

    The matrix has the potential gradient in squared-diagonal coordinates as
    its first row and an independent set of Cayley-Menger constraint
    gradients below; the charges stabilize the configuration exactly when
    every maximal minor vanishes.
    """

    matrix: np.ndarray
    minors: np.ndarray
    constraint_rows: tuple[int, ...]

    @property
    def max_abs_minor(self) -> float:
        return float(np.max(np.abs(self.minors)))


def _select_independent_rows(grads: np.ndarray, count: int) -> list[int]:
    # greedy orthogonal selection of well-conditioned constraint gradients
    chosen: list[int] = []
    basis: list[np.ndarray] = []
    for _ in range(count):
        best, best_norm = None, -1.0
        for i in range(len(grads)):
            if i in chosen:
                continue
            r = grads[i].copy()
            for b in basis:
                r -= (r @ b) * b
            nrm = float(np.linalg.norm(r))
            if nrm > best_norm:
                best, best_norm = i, nrm
        chosen.append(best)
        r = grads[best].copy()
        for b in basis:
            r -= (r @ b) * b
        basis.append(r / np.linalg.norm(r))
    return chosen


def rank_system(config: Configuration, q) -> RankSystem:
    """Build the rank-deficiency system for a quadrilateral or pentagon.

    Works in normalized units (largest side scaled to 1) so that minor
    magnitudes are comparable across configurations.
    """
    cn = _normalized(config)
    n = cn.n
    if n == 5:
        xs = diagonals(cn)
        values, grads = cm_constraints(xs, cn.linkage())
        c = charge_products(q, 5)
        erow = -0.5 * c * xs ** -1.5
        rows = _select_independent_rows(grads, 3)
        jmat = np.vstack([erow, grads[rows]])
        k = 5
        minors = np.array([
            np.linalg.det(np.delete(jmat, col, axis=1)) for col in range(k)
        ])
        return RankSystem(matrix=jmat, minors=minors, constraint_rows=tuple(rows))
    if n == 4:
        x, y = quad_psi(cn)
        m = quad_constraint_matrix(tuple(cn.sidelengths()), x, y)
        c = charge_products(q, 4)
        erow = np.array([-0.5 * c[0] * x ** -1.5, -0.5 * c[1] * y ** -1.5])
        drow = np.array([cm_entry_gradient(m, 0, 2), cm_entry_gradient(m, 1, 3)])
        jmat = np.vstack([erow, drow])
        minors = np.array([np.linalg.det(jmat)])
        return RankSystem(matrix=jmat, minors=minors, constraint_rows=(0,))
    raise NotRealizable("rank_system supports n in {4, 5}")


def bezout_bound(n: int) -> int:
    """Upper bound 2**(n-3) on the number of stabilizing charge tuples."""
    if n < 4:
        raise ValueError("polygons with fewer than 4 vertices have no diagonals")
    return 2 ** (n - 3)


def mixed_sign_noncritical(config: Configuration, q) -> bool:
    """True when a convex pentagon with oppositely signed controlling charges
    is not a critical point (the stationarity residual stays above tolerance)."""
    vals = np.asarray(q, dtype=float)
    if vals.shape != (5,):
        raise ValueError("expected five charges")
    s, t = vals[4], vals[2]
    if s * t >= 0.0:
        raise ValueError(f"controlling charges must have opposite signs, got s={s}, t={t}")
    _require_strict(config)
    return stationarity_residual(_normalized(config), vals) > 1e-6
