"""Stabilizing charges: quadrilateral t, pentagon (s, t), rank system."""

import math

import numpy as np
import pytest

from coulink.errors import (
    BoundaryConfiguration,
    NonPositiveCharge,
    NotConvex,
)
from coulink.moduli import (
    Configuration,
    Linkage,
    diagonals,
    quad_convex_range,
    reconstruct_pentagon,
    reconstruct_quad,
)
from coulink.potential import global_min_convex, stationarity_residual
from coulink.sampling import (
    random_convex_pentagon,
    random_convex_quad,
    random_positive_charges,
)
from coulink.stabilizer import (
    bezout_bound,
    mixed_sign_noncritical,
    pentagon_jacobian,
    rank_system,
    stabilize_pentagon,
    stabilize_quad,
)
from coulink.verify import regular_pentagon

EQUILATERAL = Linkage((1.0, 1.0, 1.0, 1.0, 1.0))
RHOMBUS = Linkage((1.0, 1.0, 1.0, 1.0))


# ---------------------------------------------------------------------------
# pentagon jacobian


def test_jacobian_signs_regular_pentagon():
    jac = pentagon_jacobian(regular_pentagon())
    # monotonicity along both slice families fixes all six signs
    assert jac.alpha1 < 0 and jac.beta1 < 0 and jac.gamma1 > 0
    assert jac.alpha2 > 0 and jac.beta2 < 0 and jac.gamma2 < 0


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(0)
    for _ in range(30):
        linkage, cfg = random_convex_pentagon(rng, margin=0.08)
        jac = pentagon_jacobian(cfg)
        xs = diagonals(cfg)
        b2, b4 = math.sqrt(xs[1]), math.sqrt(xs[3])
        h = 1e-6

        def lengths(db2, db4):
            c = reconstruct_pentagon(linkage, b2 + db2, b4 + db4)
            return np.sqrt(diagonals(c))

        d_b4 = (lengths(0, h) - lengths(0, -h)) / (2 * h)
        d_b2 = (lengths(h, 0) - lengths(-h, 0)) / (2 * h)
        for got, want in (
            (jac.alpha1, d_b4[4]),
            (jac.beta1, d_b4[2]),
            (jac.gamma1, d_b4[0]),
            (jac.alpha2, d_b2[4]),
            (jac.beta2, d_b2[2]),
            (jac.gamma2, d_b2[0]),
        ):
            assert abs(got - want) <= 1e-6 * max(1.0, abs(got))


def test_jacobian_rejects_boundary():
    cfg = reconstruct_pentagon(EQUILATERAL, 2.0, 1.8)
    with pytest.raises(BoundaryConfiguration):
        pentagon_jacobian(cfg)


# ---------------------------------------------------------------------------
# pentagon stabilization


def test_stabilize_regular_pentagon():
    sol = stabilize_pentagon(regular_pentagon(), 1.0, 1.0, 1.0)
    assert sol.s == pytest.approx(1.0, abs=1e-9)
    assert sol.t == pytest.approx(1.0, abs=1e-9)
    assert sol.residual <= 1e-12


def test_stabilize_coefficient_signs_and_roots():
    rng = np.random.default_rng(1)
    for _ in range(50):
        _, cfg = random_convex_pentagon(rng)
        q1, q2, q4 = random_positive_charges(rng, 3)
        sol = stabilize_pentagon(cfg, q1, q2, q4)
        assert sol.coeffs.a * sol.coeffs.c < 0
        # product of the two roots is A/C < 0: the other root is negative
        assert sol.coeffs.a / sol.coeffs.c < 0
        assert sol.s > 0 and sol.t > 0
        assert sol.residual <= 1e-8


def test_stabilize_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(25):
        linkage, cfg = random_convex_pentagon(rng)
        q1, q2, q4 = random_positive_charges(rng, 3)
        sol = stabilize_pentagon(cfg, q1, q2, q4)
        recovered, _ = global_min_convex(linkage, (q1, q2, sol.t, q4, sol.s))
        assert recovered.max_vertex_distance(cfg) <= 1e-6


def test_stabilize_varies_continuously():
    rng = np.random.default_rng(3)
    linkage, cfg = random_convex_pentagon(rng, margin=0.15)
    xs = diagonals(cfg)
    b2, b4 = math.sqrt(xs[1]), math.sqrt(xs[3])
    sols = []
    for d in np.linspace(0.0, 0.01, 6):
        c = reconstruct_pentagon(linkage, b2 + d, b4)
        sols.append(stabilize_pentagon(c, 1.0, 1.0, 1.0))
    for a, b in zip(sols, sols[1:]):
        assert abs(a.s - b.s) < 0.05
        assert abs(a.t - b.t) < 0.05


def test_stabilize_unique_in_positive_quadrant():
    # desk-scale uniqueness: no second positive pair comes close to critical
    rng = np.random.default_rng(4)
    _, cfg = random_convex_pentagon(rng)
    sol = stabilize_pentagon(cfg, 1.0, 1.0, 1.0)
    for s in np.linspace(0.1, 3.0, 15):
        for t in np.linspace(0.1, 3.0, 15):
            if abs(s - sol.s) < 0.2 and abs(t - sol.t) < 0.2:
                continue
            res = stationarity_residual(cfg, (1.0, 1.0, t, 1.0, s))
            assert res > 1e-6


def test_stabilize_rejects_bad_inputs():
    with pytest.raises(NonPositiveCharge):
        stabilize_pentagon(regular_pentagon(), 1.0, -1.0, 1.0)
    nonconvex = Configuration.from_vertices(
        np.array([[0.0, 0.0], [1.0, 0.0], [1.2, 0.8], [0.5, 0.3], [-0.2, 0.9]])
    )
    with pytest.raises(NotConvex):
        stabilize_pentagon(nonconvex, 1.0, 1.0, 1.0)


# ---------------------------------------------------------------------------
# quadrilateral stabilization


def test_stabilize_square():
    square = reconstruct_quad(RHOMBUS, math.sqrt(2.0))
    assert stabilize_quad(RHOMBUS, square) == pytest.approx(1.0, abs=1e-9)


def test_stabilize_quad_fd_oracle():
    rng = np.random.default_rng(5)
    for _ in range(25):
        linkage, cfg = random_convex_quad(rng)
        t = stabilize_quad(linkage, cfg)
        assert t > 0
        # independent check: stationarity along the configuration circle
        x = float(np.sum((cfg.vertices[2] - cfg.vertices[0]) ** 2))
        d13 = math.sqrt(x)
        lo, hi = quad_convex_range(linkage)
        h = min(1e-6, 0.25 * (d13 - lo), 0.25 * (hi - d13))
        up = reconstruct_quad(linkage, d13 + h)
        dn = reconstruct_quad(linkage, d13 - h)

        def energy(c):
            v = c.vertices
            d_ac = float(np.hypot(*(v[2] - v[0])))
            d_bd = float(np.hypot(*(v[3] - v[1])))
            return 1.0 / d_ac + t / d_bd

        fd = (energy(up) - energy(dn)) / (2 * h)
        assert abs(fd) <= 1e-7


def test_stabilize_quad_rejects_nonconvex():
    dart = Configuration.from_vertices(
        np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.2], [0.5, 1.0]])
    )
    with pytest.raises(NotConvex):
        stabilize_quad(dart.linkage(), dart)


# ---------------------------------------------------------------------------
# rank system and bounds


def test_rank_system_vanishes_for_stabilizing_charges():
    rng = np.random.default_rng(6)
    for _ in range(20):
        _, cfg = random_convex_pentagon(rng)
        q1, q2, q4 = random_positive_charges(rng, 3)
        sol = stabilize_pentagon(cfg, q1, q2, q4)
        rs = rank_system(cfg, (q1, q2, sol.t, q4, sol.s))
        assert rs.matrix.shape == (4, 5)
        assert rs.minors.shape == (5,)
        assert rs.max_abs_minor <= 1e-8


def test_rank_system_nonzero_for_random_charges():
    rng = np.random.default_rng(7)
    _, cfg = random_convex_pentagon(rng)
    rs = rank_system(cfg, (1.0, 2.0, 0.7, 1.3, 1.9))
    assert rs.max_abs_minor > 1e-8


def test_rank_system_quad_sign_structure():
    # the single minor is a difference of two positive charge products, so
    # it changes sign between the two coordinate quadrants of charge space
    rng = np.random.default_rng(8)
    _, cfg = random_convex_quad(rng)
    heavy_x = rank_system(cfg, (10.0, 0.1, 10.0, 0.1)).minors[0]
    heavy_y = rank_system(cfg, (0.1, 10.0, 0.1, 10.0)).minors[0]
    assert heavy_x * heavy_y < 0


def test_rank_system_quad_vanishes_at_stabilizer():
    rng = np.random.default_rng(9)
    linkage, cfg = random_convex_quad(rng)
    t = stabilize_quad(linkage, cfg)
    rs = rank_system(cfg, (1.0, 1.0, 1.0, t))
    assert rs.max_abs_minor <= 1e-10


def test_bezout_bound():
    assert bezout_bound(4) == 2
    assert bezout_bound(5) == 4
    with pytest.raises(ValueError):
        bezout_bound(3)


# ---------------------------------------------------------------------------
# mixed-sign controlling charges


def test_mixed_sign_never_critical():
    pent = regular_pentagon()
    assert mixed_sign_noncritical(pent, (1.0, 1.0, -1.0, 1.0, 1.0))
    assert mixed_sign_noncritical(pent, (1.0, 1.0, 1.0, 1.0, -1.0))


def test_mixed_sign_precondition():
    with pytest.raises(ValueError):
        mixed_sign_noncritical(regular_pentagon(), (1.0, 1.0, 1.0, 1.0, 1.0))
