"""Distance-geometry primitives: determinants, derivatives, signed areas."""

import math

import numpy as np
import pytest

from coulink.geometry import (
    area_vector,
    cayley_menger,
    cayley_menger_points,
    cm_entry_gradient,
    cm_partial_x13,
    signed_area,
    squared_distances,
    tetrahedron_volume,
)

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def test_regular_tetrahedron_determinant():
    # oracle: D = 288 V^2 with V = 1/(6 sqrt(2)) for the unit regular tetrahedron
    expected = 288.0 * (1.0 / (6.0 * math.sqrt(2.0))) ** 2
    assert expected == pytest.approx(4.0, abs=1e-14)
    d2 = np.ones((4, 4)) - np.eye(4)
    assert cayley_menger(d2) == pytest.approx(4.0, abs=1e-12)


def test_coplanar_square_vanishes():
    assert cayley_menger(squared_distances(UNIT_SQUARE)) == pytest.approx(0.0, abs=1e-12)


def test_repeated_point_vanishes():
    pts = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 2.0, 0.5], [0.3, -1.0, 2.0]])
    assert cayley_menger_points(pts) == pytest.approx(0.0, abs=1e-12)


def test_volume_identity_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        pts = rng.uniform(-1.0, 1.0, (4, 3))
        det = cayley_menger_points(pts)
        vol = tetrahedron_volume(pts)
        assert abs(det - 288.0 * vol * vol) <= 1e-9 * max(1.0, abs(det))


def test_signed_area_examples():
    assert signed_area((0, 0), (1, 0), (1, 1)) == pytest.approx(0.5)
    assert signed_area((0, 0), (1, 1), (1, 0)) == pytest.approx(-0.5)
    assert signed_area((0, 0), (1, 1), (2, 2)) == pytest.approx(0.0)


def test_signed_area_antisymmetry():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, b, c = rng.uniform(-2, 2, (3, 2))
        assert signed_area(a, b, c) == -signed_area(a, c, b)


def test_area_vector_matches_scalar_in_plane():
    rng = np.random.default_rng(2)
    for _ in range(200):
        pts = rng.uniform(-1, 1, (4, 2))
        dot = float(
            np.dot(area_vector(pts[0], pts[1], pts[3]), area_vector(pts[1], pts[2], pts[3]))
        )
        prod = signed_area(pts[0], pts[1], pts[3]) * signed_area(pts[1], pts[2], pts[3])
        assert abs(dot - prod) <= 1e-12


def test_partial_unit_square():
    # S124 = S234 = 1/2, so the derivative is -32 * 1/4 = -8
    assert cm_partial_x13(UNIT_SQUARE) == pytest.approx(-8.0, abs=1e-12)
    d2 = squared_distances(UNIT_SQUARE)
    h = 1e-6
    dp, dm = d2.copy(), d2.copy()
    dp[0, 2] = dp[2, 0] = d2[0, 2] + h
    dm[0, 2] = dm[2, 0] = d2[0, 2] - h
    fd = (cayley_menger(dp) - cayley_menger(dm)) / (2 * h)
    assert fd == pytest.approx(-8.0, rel=1e-8)


def test_partial_vanishes_for_coincident_points():
    pts = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.2, 0.0], [0.1, 1.0, 0.7]])
    assert cm_partial_x13(pts) == pytest.approx(0.0, abs=1e-15)


def test_partial_matches_finite_differences_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        pts = rng.uniform(-1, 1, (4, 3))
        d2 = squared_distances(pts)
        h = 1e-6 * max(float(d2.max()), 1.0)
        analytic = cm_partial_x13(pts)
        dp, dm = d2.copy(), d2.copy()
        dp[0, 2] = dp[2, 0] = d2[0, 2] + h
        dm[0, 2] = dm[2, 0] = d2[0, 2] - h
        fd = (cayley_menger(dp) - cayley_menger(dm)) / (2 * h)
        assert abs(analytic - fd) <= 1e-6 * max(1.0, abs(analytic))


def test_entry_gradient_is_exact():
    # cofactor derivative against a central difference, which is itself exact
    # for the determinant's quadratic dependence on a symmetric entry pair
    rng = np.random.default_rng(4)
    for _ in range(50):
        pts = rng.uniform(-1, 1, (4, 3))
        d2 = squared_distances(pts)
        for (p, q) in ((0, 1), (0, 2), (1, 3), (2, 3)):
            h = 0.37
            dp, dm = d2.copy(), d2.copy()
            dp[p, q] = dp[q, p] = d2[p, q] + h
            dm[p, q] = dm[q, p] = d2[p, q] - h
            fd = (cayley_menger(dp) - cayley_menger(dm)) / (2 * h)
            assert cm_entry_gradient(d2, p, q) == pytest.approx(fd, rel=1e-10, abs=1e-10)


def test_entry_gradient_rejects_diagonal():
    with pytest.raises(ValueError):
        cm_entry_gradient(np.zeros((4, 4)), 1, 1)


def test_batched_determinants():
    rng = np.random.default_rng(5)
    mats = []
    for _ in range(7):
        pts = rng.uniform(-1, 1, (4, 3))
        mats.append(squared_distances(pts))
    batch = cayley_menger(np.stack(mats))
    assert batch.shape == (7,)
    for i, m in enumerate(mats):
        assert batch[i] == pytest.approx(cayley_menger(m), rel=1e-12)
