"""Linkages, canonical configurations, reconstruction, slices, constraints."""

import math

import numpy as np
import pytest

from coulink.errors import (
    DegenerateInput,
    EmptySlice,
    NotRealizable,
)
from coulink.geometry import cayley_menger
from coulink.moduli import (
    Configuration,
    Linkage,
    admissible_diagonal_range,
    canonicalize,
    cm_constraints,
    constraint_matrix,
    convexity_status,
    cyclic_configuration,
    diagonals,
    is_strictly_convex,
    quad_curve_residual,
    quad_psi,
    reconstruct_pentagon,
    reconstruct_quad,
    sample_convex,
    slice_range,
)
from coulink.sampling import random_convex_pentagon, random_linkage
from coulink.verify import GOLDEN_RATIO, regular_pentagon

EQUILATERAL = Linkage((1.0, 1.0, 1.0, 1.0, 1.0))


# ---------------------------------------------------------------------------
# linkage validation


def test_linkage_rejects_long_side():
    with pytest.raises(NotRealizable):
        Linkage((10.0, 1.0, 1.0, 1.0, 1.0))


def test_linkage_rejects_nonpositive_side():
    with pytest.raises(NotRealizable):
        Linkage((1.0, -0.5, 1.0, 1.0, 1.0))


def test_linkage_rejects_wrong_arity():
    with pytest.raises(NotRealizable):
        Linkage((1.0, 1.0, 1.0))


def test_genericity_flag():
    assert EQUILATERAL.is_generic
    # 1 + 1 - 1 + 1 - 2 = 0 admits a collinear configuration
    assert not Linkage((1.0, 1.0, 1.0, 1.0, 2.0)).is_generic


# ---------------------------------------------------------------------------
# canonical placement


def test_canonicalize_idempotent():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    assert np.allclose(canonicalize(square), square, atol=1e-15)


def test_canonicalize_translation_invariance():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    assert np.allclose(canonicalize(square + [3.0, 7.0]), square, atol=1e-12)


def test_canonicalize_normalizes_reflection():
    pent = regular_pentagon()
    mirrored = pent.vertices.copy()
    mirrored[:, 1] = -mirrored[:, 1]
    again = Configuration.from_vertices(mirrored)
    assert pent.max_vertex_distance(again) <= 1e-12


def test_canonicalize_rejects_coincident_frame():
    with pytest.raises(DegenerateInput):
        canonicalize(np.zeros((5, 2)))


# ---------------------------------------------------------------------------
# convexity predicates


def test_regular_pentagon_is_strictly_convex():
    assert is_strictly_convex(regular_pentagon())


def test_boundary_pentagon_detected():
    # three consecutive vertices aligned: angle pi
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [2.5, 1.0], [0.5, 1.5]])
    assert convexity_status(verts) == "boundary"
    assert not is_strictly_convex(verts)


def test_reflex_pentagon_detected():
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [1.2, 0.8], [0.5, 0.3], [-0.2, 0.9]])
    assert convexity_status(verts) == "nonconvex"


def test_pentagram_is_not_convex():
    # all turning crosses share a sign, but the traversal winds twice
    ang = 4.0 * math.pi * np.arange(5) / 5.0
    verts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    assert convexity_status(verts) == "nonconvex"


# ---------------------------------------------------------------------------
# diagonals and reconstruction


def test_regular_pentagon_diagonals():
    xs = diagonals(regular_pentagon())
    assert np.allclose(xs, GOLDEN_RATIO**2, atol=1e-12)


def test_reconstruct_regular_pentagon():
    cfg = reconstruct_pentagon(EQUILATERAL, GOLDEN_RATIO, GOLDEN_RATIO)
    assert cfg.max_vertex_distance(regular_pentagon()) <= 1e-12


def test_reconstruct_boundary_status():
    # b2 = a1 + a2 aligns the first three vertices (b4 wide enough that the
    # rest of the polygon stays convex)
    cfg = reconstruct_pentagon(EQUILATERAL, 2.0, 1.8)
    assert convexity_status(cfg.vertices) == "boundary"


def test_reconstruct_rejects_violated_triangle():
    with pytest.raises(NotRealizable):
        reconstruct_pentagon(EQUILATERAL, 2.001, 1.2)


def test_reconstruct_round_trip():
    rng = np.random.default_rng(10)
    for _ in range(100):
        linkage, cfg = random_convex_pentagon(rng)
        xs = diagonals(cfg)
        again = reconstruct_pentagon(linkage, math.sqrt(xs[1]), math.sqrt(xs[3]))
        assert cfg.max_vertex_distance(again) <= 1e-8


def test_diagonal_map_injective_on_samples():
    rng = np.random.default_rng(11)
    linkage = random_linkage(rng, 5)
    _, c1 = random_convex_pentagon(rng, linkage=linkage)
    _, c2 = random_convex_pentagon(rng, linkage=linkage)
    if c1.max_vertex_distance(c2) > 1e-6:
        assert np.max(np.abs(diagonals(c1) - diagonals(c2))) > 1e-12


# ---------------------------------------------------------------------------
# cyclic configurations


def test_cyclic_configuration_convex():
    rng = np.random.default_rng(12)
    for _ in range(25):
        linkage = random_linkage(rng, 5)
        cfg = cyclic_configuration(linkage)
        assert is_strictly_convex(cfg)
        assert np.allclose(cfg.sidelengths(), linkage.sides, atol=1e-9)


def test_cyclic_configuration_long_side_case():
    linkage = Linkage((1.9, 1.0, 0.5, 0.5, 0.5)).normalized()
    cfg = cyclic_configuration(linkage)
    assert is_strictly_convex(cfg)
    assert np.allclose(cfg.sidelengths(), linkage.sides, atol=1e-9)


# ---------------------------------------------------------------------------
# slices


def test_slice_contains_regular_pentagon():
    sl = slice_range(EQUILATERAL, GOLDEN_RATIO)
    assert sl.x2_min < GOLDEN_RATIO**2 < sl.x2_max


def test_slice_empty_for_tiny_diagonal():
    with pytest.raises(EmptySlice):
        slice_range(EQUILATERAL, 1e-4)


def test_terminal_slice_degenerates():
    # the chain (a5, a1, a2) binds the upper end: at k -> 0.9 the chain is
    # straight and the slice is a single point
    linkage = Linkage((0.3, 0.3, 1.0, 1.0, 0.3))
    k_lo, k_hi = admissible_diagonal_range(linkage)
    assert k_hi == pytest.approx(0.9, abs=1e-6)
    widths = []
    for frac in (0.9, 0.99, 0.999):
        k = k_lo + frac * (k_hi - k_lo)
        sl = slice_range(linkage, k)
        widths.append(sl.x2_max - sl.x2_min)
    assert widths[0] > widths[1] > widths[2]
    assert slice_range(linkage, k_lo + (1.0 - 1e-7) * (k_hi - k_lo)).is_terminal


def test_slice_ranges_vary_continuously():
    ks = np.linspace(1.2, 1.8, 30)
    slices = [slice_range(EQUILATERAL, float(k)) for k in ks]
    lo = np.array([s.x2_min for s in slices])
    hi = np.array([s.x2_max for s in slices])
    assert np.max(np.abs(np.diff(lo))) < 0.2
    assert np.max(np.abs(np.diff(hi))) < 0.2


def test_sample_convex_grid():
    configs = sample_convex(EQUILATERAL, (20, 20))
    assert all(is_strictly_convex(c) for c in configs)
    pent = regular_pentagon()
    assert min(c.max_vertex_distance(pent) for c in configs) < 0.15


def test_sample_convex_single():
    configs = sample_convex(EQUILATERAL, (1, 1))
    assert len(configs) == 1
    assert is_strictly_convex(configs[0])


# ---------------------------------------------------------------------------
# constraint system


def test_constraints_vanish_on_realized_configurations():
    rng = np.random.default_rng(13)
    for _ in range(50):
        linkage, cfg = random_convex_pentagon(rng)
        values, _ = cm_constraints(diagonals(cfg), linkage)
        assert np.max(np.abs(values)) <= 1e-9


def test_constraint_gradient_sign_row():
    # second constraint row: zeros at positions 0 and 2, positive at 1,
    # negative at 3 and 4
    linkage = EQUILATERAL
    _, grads = cm_constraints(diagonals(regular_pentagon()), linkage)
    row = grads[1]
    assert row[0] == 0.0 and row[2] == 0.0
    assert row[1] > 0 and row[3] < 0 and row[4] < 0


def test_perturbed_diagonal_breaks_constraint():
    xs = diagonals(regular_pentagon())
    xs = xs.copy()
    xs[1] += 0.1
    values, _ = cm_constraints(xs, EQUILATERAL)
    # the constraint omitting vertex 3 depends on xs[1]
    assert abs(values[3]) > 1e-3


def test_constraint_gradients_match_finite_differences():
    rng = np.random.default_rng(14)
    for _ in range(20):
        linkage, cfg = random_convex_pentagon(rng)
        xs = diagonals(cfg)
        _, grads = cm_constraints(xs, linkage)
        h = 1e-6
        for i in range(5):
            for j in range(5):
                xp, xm = xs.copy(), xs.copy()
                xp[j] += h
                xm[j] -= h
                fd = (
                    cayley_menger(constraint_matrix(i, linkage.sides, xp))
                    - cayley_menger(constraint_matrix(i, linkage.sides, xm))
                ) / (2 * h)
                assert abs(grads[i, j] - fd) <= 1e-6 * max(1.0, abs(grads[i, j]))


# ---------------------------------------------------------------------------
# quadrilaterals


def test_quad_psi_unit_square():
    square = reconstruct_quad(Linkage((1.0, 1.0, 1.0, 1.0)), math.sqrt(2.0))
    x, y = quad_psi(square)
    assert x == pytest.approx(2.0, abs=1e-12)
    assert y == pytest.approx(2.0, abs=1e-12)
    assert quad_curve_residual(Linkage((1.0, 1.0, 1.0, 1.0)), x, y) == pytest.approx(
        0.0, abs=1e-10
    )


def test_rhombus_family_parallelogram_law():
    rhombus = Linkage((1.0, 1.0, 1.0, 1.0))
    for d13 in np.linspace(0.4, 1.9, 17):
        cfg = reconstruct_quad(rhombus, float(d13))
        x, y = quad_psi(cfg)
        assert x + y == pytest.approx(4.0, abs=1e-10)
        assert quad_curve_residual(rhombus, x, y) == pytest.approx(0.0, abs=1e-9)


def test_quad_curve_residual_off_curve():
    assert abs(quad_curve_residual(Linkage((1.0, 1.0, 1.0, 1.0)), 0.01, 0.01)) > 1e-4
