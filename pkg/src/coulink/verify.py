"""Numerical verification suites.

Each suite exercises one family of invariants at a configurable sample
count and returns a deterministic result for a given seed: derivative
oracles for the Cayley-Menger calculus, the constraint-gradient sign
table, slice monotonicity and convexity, uniqueness of the convex
minimum, stabilizer round trips, the mixed-sign non-criticality check,
navigation fidelity, and the boundary criticality scan.

The suites are the engine behind the ``verify`` CLI subcommand and the
acceptance test module; tolerances default to the package-wide contract
values and can be tightened by callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .control import boundary_criticality_scan, navigate
from .geometry import (
    area_vector,
    cayley_menger,
    cayley_menger_points,
    cm_partial_x13,
    signed_area,
    squared_distances,
    tetrahedron_volume,
)
from .moduli import (
    Configuration,
    Linkage,
    cm_constraints,
    convexity_status,
    diagonals,
    quad_convex_range,
    quad_psi,
    reconstruct_quad,
    slice_range,
)
from .potential import (
    PentagonFrame,
    charge_products,
    global_min_convex,
    slice_derivatives,
    stationarity_residual,
    verify_unique_min,
)
from .sampling import (
    random_convex_pentagon,
    random_convex_quad,
    random_linkage,
    random_positive_charges,
)
from .stabilizer import stabilize_pentagon, stabilize_quad

__all__ = ["SuiteResult", "SUITES", "run_suites", "regular_pentagon", "GOLDEN_RATIO"]

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def regular_pentagon() -> Configuration:
    """The unit-side regular pentagon in canonical placement."""
    r = 0.5 / math.sin(math.pi / 5.0)
    angles = 2.0 * math.pi * np.arange(5) / 5.0
    verts = r * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return Configuration.from_vertices(verts)


# ---------------------------------------------------------------------------


def suite_cm_derivative(seed: int = 0, n: int = 1000) -> SuiteResult:
    """Derivative of the 4-point determinant against central differences,
    plus the coplanar signed-area specialization."""
    rng = np.random.default_rng(seed)
    worst_fd = 0.0
    for _ in range(n):
        pts = rng.uniform(-1.0, 1.0, (4, 3))
        d2 = squared_distances(pts)
        h = 1e-6 * max(float(d2.max()), 1.0)
        analytic = cm_partial_x13(pts)
        dp = d2.copy()
        dp[0, 2] = dp[2, 0] = d2[0, 2] + h
        dm = d2.copy()
        dm[0, 2] = dm[2, 0] = d2[0, 2] - h
        fd = (cayley_menger(dp) - cayley_menger(dm)) / (2.0 * h)
        worst_fd = max(worst_fd, abs(analytic - fd) / max(1.0, abs(analytic)))
    worst_cop = 0.0
    worst_dot = 0.0
    for _ in range(n):
        pts = rng.uniform(-1.0, 1.0, (4, 2))
        analytic = cm_partial_x13(pts)
        s124 = signed_area(pts[0], pts[1], pts[3])
        s234 = signed_area(pts[1], pts[2], pts[3])
        worst_cop = max(worst_cop, abs(analytic - (-32.0 * s124 * s234)))
        dot = float(np.dot(area_vector(pts[0], pts[1], pts[3]),
                           area_vector(pts[1], pts[2], pts[3])))
        worst_dot = max(worst_dot, abs(dot - s124 * s234))
    passed = worst_fd <= 1e-6 and worst_cop <= 1e-10 and worst_dot <= 1e-12
    return SuiteResult(
        "cm-derivative", passed,
        f"n={n} fd_rel={worst_fd:.3e} coplanar_abs={worst_cop:.3e} dot_abs={worst_dot:.3e}",
    )


def suite_cm_volume(seed: int = 0, n: int = 1000) -> SuiteResult:
    """Determinant equals 288 * V**2 with V from the scalar triple product."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        pts = rng.uniform(-1.0, 1.0, (4, 3))
        det = cayley_menger_points(pts)
        vol = tetrahedron_volume(pts)
        worst = max(worst, abs(det - 288.0 * vol * vol) / max(1.0, abs(det)))
    d2 = np.ones((4, 4)) - np.eye(4)
    anchor = abs(cayley_menger(d2) - 4.0)
    passed = worst <= 1e-9 and anchor <= 1e-12
    return SuiteResult(
        "cm-volume", passed, f"n={n} vol_rel={worst:.3e} regular_tetra_abs={anchor:.3e}"
    )


_SIGN_TABLE = np.zeros((5, 5), dtype=int)
for _i in range(5):
    _SIGN_TABLE[_i, _i] = 1
    _SIGN_TABLE[_i, (_i + 2) % 5] = -1
    _SIGN_TABLE[_i, (_i + 3) % 5] = -1


def suite_sign_table(seed: int = 0, n: int = 1000) -> SuiteResult:
    """All 25 sign entries of the constraint gradients on convex pentagons."""
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n):
        linkage, cfg = random_convex_pentagon(rng)
        _, grads = cm_constraints(diagonals(cfg), linkage)
        signs = np.zeros((5, 5), dtype=int)
        signs[grads > 0] = 1
        signs[grads < 0] = -1
        if not np.array_equal(signs, _SIGN_TABLE):
            bad += 1
    return SuiteResult("sign-table", bad == 0, f"n={n} mismatches={bad}")


def suite_slice_calculus(seed: int = 0, n: int = 1000) -> SuiteResult:
    """Monotonicity of b1, b3, b5 along slices and strict convexity of the
    restricted potential, by formula and by differences."""
    rng = np.random.default_rng(seed)
    bad_sign = bad_fd_sign = bad_convex = 0
    worst_d1 = 0.0
    count = 0
    while count < n:
        linkage, cfg = random_convex_pentagon(rng, margin=0.08)
        q = random_positive_charges(rng, 5)
        xs = diagonals(cfg)
        x2, k = float(xs[1]), math.sqrt(float(xs[3]))
        sl = slice_range(linkage, k)
        h = 1e-5
        if x2 - h <= sl.x2_min or x2 + h >= sl.x2_max:
            continue
        count += 1
        frame = PentagonFrame(linkage.sides, x2, k * k)
        fp = frame.first_partials()
        if not (fp[0, 0] < 0 and fp[2, 0] < 0 and fp[4, 0] > 0):
            bad_sign += 1
        up = PentagonFrame(linkage.sides, x2 + h, k * k)
        dn = PentagonFrame(linkage.sides, x2 - h, k * k)
        slope = (up.bs - dn.bs) / (2.0 * h)
        if not (slope[0] < 0 and slope[2] < 0 and slope[4] > 0):
            bad_fd_sign += 1
        d1, d2v = slice_derivatives(linkage, q, k, x2)
        c = charge_products(q, 5)
        e_up, e_0, e_dn = up.energy(c), frame.energy(c), dn.energy(c)
        fd1 = (e_up - e_dn) / (2.0 * h)
        fd2 = (e_up - 2.0 * e_0 + e_dn) / (h * h)
        worst_d1 = max(worst_d1, abs(d1 - fd1) / max(1.0, abs(d1)))
        if not (d2v > 0 and fd2 > 0):
            bad_convex += 1
    passed = bad_sign == 0 and bad_fd_sign == 0 and bad_convex == 0 and worst_d1 <= 1e-6
    return SuiteResult(
        "slice-calculus", passed,
        f"n={n} sign_bad={bad_sign} fd_sign_bad={bad_fd_sign} "
        f"nonconvex={bad_convex} d1_rel={worst_d1:.3e}",
    )


def suite_uniqueness(
    seed: int = 0, cases: int = 100, grid: tuple[int, int] = (200, 200), starts: int = 20
) -> SuiteResult:
    """Exactly one strict grid-local minimum and agreeing multistart descent."""
    rng = np.random.default_rng(seed)
    bad = []
    worst_spread = 0.0
    for i in range(cases):
        linkage = random_linkage(rng, 5, lo=0.55)
        q = random_positive_charges(rng, 5)
        report = verify_unique_min(linkage, q, grid=grid, starts=starts, seed=seed + i)
        worst_spread = max(worst_spread, report.multistart_spread)
        if not (report.grid_minima == 1 and report.multistart_spread <= 1e-6
                and report.max_derivative_sign_changes <= 1):
            bad.append((i, report.grid_minima, report.multistart_spread))
    return SuiteResult(
        "uniqueness", not bad,
        f"cases={cases} grid={grid[0]}x{grid[1]} starts={starts} "
        f"failures={len(bad)} max_spread={worst_spread:.3e}",
    )


def suite_equilateral_anchor() -> SuiteResult:
    """Equilateral linkage with unit charges minimizes at the regular pentagon."""
    linkage = Linkage((1.0, 1.0, 1.0, 1.0, 1.0))
    cfg, energy = global_min_convex(linkage, np.ones(5))
    target = regular_pentagon()
    vert_err = cfg.max_vertex_distance(target)
    e_err = abs(energy - 5.0 / GOLDEN_RATIO)
    passed = vert_err <= 1e-8 and e_err <= 1e-9
    return SuiteResult(
        "equilateral-anchor", passed, f"vertex_err={vert_err:.3e} energy_err={e_err:.3e}"
    )


def suite_stabilizer(seed: int = 0, n: int = 1000) -> SuiteResult:
    """AC < 0, positive charges, small residual, and the minimization round trip."""
    rng = np.random.default_rng(seed)
    bad_ac = bad_pos = bad_res = bad_rt = 0
    worst_res = worst_rt = 0.0
    for _ in range(n):
        linkage, cfg = random_convex_pentagon(rng, margin=0.05)
        q1, q2, q4 = random_positive_charges(rng, 3)
        sol = stabilize_pentagon(cfg, q1, q2, q4)
        if not (sol.coeffs.a * sol.coeffs.c < 0):
            bad_ac += 1
        if not (sol.s > 0 and sol.t > 0):
            bad_pos += 1
        worst_res = max(worst_res, sol.residual)
        if sol.residual > 1e-8:
            bad_res += 1
        recovered, _ = global_min_convex(linkage, (q1, q2, sol.t, q4, sol.s))
        err = recovered.max_vertex_distance(cfg)
        worst_rt = max(worst_rt, err)
        if err > 1e-6:
            bad_rt += 1
    anchor = stabilize_pentagon(regular_pentagon(), 1.0, 1.0, 1.0)
    anchor_err = max(abs(anchor.s - 1.0), abs(anchor.t - 1.0))
    passed = (
        bad_ac == 0 and bad_pos == 0 and bad_res == 0 and bad_rt == 0
        and anchor_err <= 1e-9
    )
    return SuiteResult(
        "stabilizer", passed,
        f"n={n} ac_bad={bad_ac} sign_bad={bad_pos} res_bad={bad_res} "
        f"rt_bad={bad_rt} max_res={worst_res:.3e} max_rt={worst_rt:.3e} "
        f"anchor_err={anchor_err:.3e}",
    )


def suite_quadrilateral(seed: int = 0, n: int = 1000) -> SuiteResult:
    """Unique positive t for convex quadrilaterals, with residual and
    finite-difference stationarity oracles."""
    rng = np.random.default_rng(seed)
    bad_pos = bad_res = bad_fd = 0
    worst_res = worst_fd = 0.0
    for _ in range(n):
        linkage, cfg = random_convex_quad(rng, margin=0.05)
        t = stabilize_quad(linkage, cfg)
        if t <= 0:
            bad_pos += 1
        res = stationarity_residual(cfg, (1.0, 1.0, 1.0, t))
        worst_res = max(worst_res, res)
        if res > 1e-8:
            bad_res += 1
        # independent oracle: stationarity along the configuration circle
        x, y = quad_psi(cfg)
        d13 = math.sqrt(x)
        h = 1e-6
        lo, hi = quad_convex_range(linkage)
        h = min(h, 0.25 * (d13 - lo), 0.25 * (hi - d13))
        up, dn = reconstruct_quad(linkage, d13 + h), reconstruct_quad(linkage, d13 - h)
        xu, yu = quad_psi(up)
        xd, yd = quad_psi(dn)
        dxdr = (xu - xd) / (2.0 * h)
        dydr = (yu - yd) / (2.0 * h)
        t_fd = -(x ** -1.5 * dxdr) / (y ** -1.5 * dydr)
        worst_fd = max(worst_fd, abs(t - t_fd) / max(1.0, abs(t)))
        if abs(t - t_fd) > 1e-8 * max(1.0, abs(t)):
            bad_fd += 1
    rhombus = Linkage((1.0, 1.0, 1.0, 1.0))
    square = reconstruct_quad(rhombus, math.sqrt(2.0))
    anchor_err = abs(stabilize_quad(rhombus, square) - 1.0)
    passed = bad_pos == 0 and bad_res == 0 and bad_fd == 0 and anchor_err <= 1e-9
    return SuiteResult(
        "quadrilateral", passed,
        f"n={n} sign_bad={bad_pos} res_bad={bad_res} fd_bad={bad_fd} "
        f"max_res={worst_res:.3e} max_fd={worst_fd:.3e} square_t_err={anchor_err:.3e}",
    )


def suite_mixed_sign(seed: int = 0, n: int = 1000) -> SuiteResult:
    """Convex pentagons are never critical when the controlling charges have
    opposite signs."""
    rng = np.random.default_rng(seed)
    bad = 0
    worst = math.inf
    for i in range(n):
        _, cfg = random_convex_pentagon(rng)
        q1, q2, q4 = random_positive_charges(rng, 3)
        u, v = random_positive_charges(rng, 2, lo=0.1, hi=2.0)
        s, t = (u, -v) if i % 2 == 0 else (-u, v)
        q = np.array([q1, q2, t, q4, s])
        res = stationarity_residual(cfg.scaled(1.0 / float(np.max(cfg.sidelengths()))), q)
        worst = min(worst, res)
        if res <= 1e-6:
            bad += 1
    return SuiteResult("mixed-sign", bad == 0, f"n={n} critical={bad} min_res={worst:.3e}")


def suite_navigation(seed: int = 0, pairs: int = 50, steps: int = 100) -> SuiteResult:
    """Endpoint fidelity, convexity along the way, and step-doubling stability."""
    rng = np.random.default_rng(seed)
    bad_end = bad_convex = bad_refine = 0
    worst_end = worst_refine = 0.0
    for _ in range(pairs):
        linkage = random_linkage(rng, 5, lo=0.55)
        _, p0 = random_convex_pentagon(rng, linkage=linkage, margin=0.08)
        _, p1 = random_convex_pentagon(rng, linkage=linkage, margin=0.08)
        q1, q2, q4 = random_positive_charges(rng, 3)
        traj = navigate(linkage, p0, p1, q1, q2, q4, steps)
        worst_end = max(worst_end, traj.endpoint_error)
        if traj.endpoint_error > 1e-5:
            bad_end += 1
        if any(convexity_status(s.configuration.vertices) != "strict" for s in traj.steps):
            bad_convex += 1
        traj2 = navigate(linkage, p0, p1, q1, q2, q4, 2 * steps)
        delta = traj.final.max_vertex_distance(traj2.final)
        worst_refine = max(worst_refine, delta)
        if delta > 1e-7:
            bad_refine += 1
    # identity navigation: constant trajectory at unit charges
    eq = Linkage((1.0,) * 5)
    pent = regular_pentagon()
    ident = navigate(eq, pent, pent, 1.0, 1.0, 1.0, 5)
    ident_ok = (
        ident.endpoint_error <= 1e-9
        and ident.max_step_displacement() <= 1e-9
        and all(abs(s.s - 1.0) <= 1e-9 and abs(s.t - 1.0) <= 1e-9 for s in ident.steps)
    )
    passed = bad_end == 0 and bad_convex == 0 and bad_refine == 0 and ident_ok
    return SuiteResult(
        "navigation", passed,
        f"pairs={pairs} steps={steps} end_bad={bad_end} convex_bad={bad_convex} "
        f"refine_bad={bad_refine} max_end={worst_end:.3e} max_refine={worst_refine:.3e} "
        f"identity_ok={ident_ok}",
    )


def suite_boundary(seed: int = 0, cases: int = 20, samples: int = 500) -> SuiteResult:
    """No critical points on the boundary of the convex region."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    bad = 0
    for _ in range(cases):
        linkage = random_linkage(rng, 5, lo=0.55)
        q = random_positive_charges(rng, 5)
        report = boundary_criticality_scan(linkage, q, samples)
        worst = min(worst, report.min_residual)
        if not report.passed:
            bad += 1
    return SuiteResult(
        "boundary", bad == 0, f"cases={cases} samples={samples} failures={bad} min_res={worst:.3e}"
    )


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "cm-derivative": suite_cm_derivative,
    "cm-volume": suite_cm_volume,
    "sign-table": suite_sign_table,
    "slice-calculus": suite_slice_calculus,
    "uniqueness": suite_uniqueness,
    "equilateral-anchor": suite_equilateral_anchor,
    "stabilizer": suite_stabilizer,
    "quadrilateral": suite_quadrilateral,
    "mixed-sign": suite_mixed_sign,
    "navigation": suite_navigation,
    "boundary": suite_boundary,
}

_QUICK_OVERRIDES = {
    "cm-derivative": {"n": 100},
    "cm-volume": {"n": 100},
    "sign-table": {"n": 100},
    "slice-calculus": {"n": 100},
    "uniqueness": {"cases": 5, "grid": (80, 80), "starts": 8},
    "stabilizer": {"n": 50},
    "quadrilateral": {"n": 100},
    "mixed-sign": {"n": 100},
    "navigation": {"pairs": 3, "steps": 40},
    "boundary": {"cases": 3, "samples": 100},
}


def run_suites(
    names=None, seed: int = 0, quick: bool = False, grid: int | None = None
) -> list[SuiteResult]:
    """Run the named suites (all by default) in a stable order.

    ``grid`` overrides the uniqueness-scan resolution (cells per axis).
    """
    selected = list(SUITES) if names is None else list(names)
    results = []
    for name in selected:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
        fn = SUITES[name]
        kwargs = dict(_QUICK_OVERRIDES.get(name, {})) if quick else {}
        if name == "uniqueness" and grid is not None:
            kwargs["grid"] = (grid, grid)
        if name != "equilateral-anchor":
            kwargs["seed"] = seed
        results.append(fn(**kwargs))
    return results
